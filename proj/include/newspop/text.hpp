#pragma once

#include <string>
#include <vector>

namespace newspop {

// Lowercased word tokens in text order. UTF-8 input; a word is a maximal run
// of letters/digits, everything else is a separator. Covers ASCII plus the
// Latin-1 / Latin Extended-A letters that dominate European news text.
std::vector<std::string> split_words(const std::string& text);

// Unigrams followed by adjacent-pair bigrams (joined with one space).
std::vector<std::string> tokenize(const std::string& text);

// UTF-8 lowercase of the same letter ranges (idempotent).
std::string fold_case(const std::string& text);

}  // namespace newspop
