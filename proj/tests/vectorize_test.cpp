#include <doctest.h>

#include <cmath>

#include "newspop/text.hpp"
#include "newspop/vectorize.hpp"

using namespace newspop;

namespace {

std::vector<std::vector<std::string>> docs_of(std::initializer_list<const char*> texts) {
    std::vector<std::vector<std::string>> docs;
    for (const char* t : texts) docs.push_back(tokenize(t));
    return docs;
}

}  // namespace

TEST_CASE("vocabulary ranks by frequency with lexicographic ties") {
    SUBCASE("five distinct terms") {
        const Vocabulary v = Vocabulary::fit({{"a", "b", "c", "d", "e"}});
        CHECK(v.size() == 5);
    }
    SUBCASE("tie broken lexicographically") {
        const Vocabulary v = Vocabulary::fit({{"zeta", "alpha", "zeta", "alpha", "mid"}});
        REQUIRE(v.size() == 3);
        CHECK(v.terms()[0] == "alpha");  // count 2, lexicographically first
        CHECK(v.terms()[1] == "zeta");
        CHECK(v.terms()[2] == "mid");
    }
    SUBCASE("12,000 distinct terms truncate to the 10,000 most frequent") {
        std::vector<std::vector<std::string>> docs;
        std::vector<std::string> doc;
        // counting oracle: the first 10,000 terms appear twice, the rest once
        char buf[16];
        for (int i = 0; i < 12000; ++i) {
            std::snprintf(buf, sizeof(buf), "t%05d", i);
            doc.push_back(buf);
            if (i < 10000) doc.push_back(buf);
        }
        docs.push_back(doc);
        const Vocabulary v = Vocabulary::fit(docs);  // default cap
        CHECK(v.size() == 10000);
        CHECK(v.id_of("t00000") >= 0);
        CHECK(v.id_of("t09999") >= 0);
        CHECK(v.id_of("t10000") == -1);
        CHECK(v.id_of("t11999") == -1);
    }
    SUBCASE("all-empty corpus gives empty vocabulary") {
        const Vocabulary v = Vocabulary::fit({{}, {}});
        CHECK(v.size() == 0);
    }
}

TEST_CASE("idf uses the smoothed training formula") {
    // 2-doc corpus, term in both docs: idf = ln(3/3) + 1 = 1
    const TfidfModel m(Vocabulary::fit(docs_of({"shared only", "shared other"})));
    const int id = m.vocabulary().id_of("shared");
    REQUIRE(id >= 0);
    CHECK(m.idf()[id] == doctest::Approx(1.0));
    const int once = m.vocabulary().id_of("only");
    CHECK(m.idf()[once] == doctest::Approx(std::log(3.0 / 2.0) + 1.0));
}

TEST_CASE("tfidf vectors are L2 normalized with train-time idf") {
    const TfidfModel m(Vocabulary::fit({{"a", "b"}, {"a", "b"}}));  // equal idf
    SUBCASE("doc 'a a b' is proportional to (2,1)") {
        const SparseVec v = m.vector({"a", "a", "b"});
        REQUIRE(v.size() == 2);
        const double n = std::sqrt(5.0);
        CHECK(v[0].value == doctest::Approx(2.0 / n));
        CHECK(v[1].value == doctest::Approx(1.0 / n));
    }
    SUBCASE("out-of-vocabulary terms are ignored") {
        CHECK(m.vector({"zzz", "qqq"}).empty());
        const SparseVec v = m.vector({"a", "zzz"});
        REQUIRE(v.size() == 1);
        CHECK(v[0].value == doctest::Approx(1.0));
    }
    SUBCASE("vectorizing twice is bit-identical") {
        const SparseVec a = m.vector({"a", "b", "b"});
        const SparseVec b = m.vector({"a", "b", "b"});
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].index == b[i].index);
            CHECK(a[i].value == b[i].value);
        }
    }
}
