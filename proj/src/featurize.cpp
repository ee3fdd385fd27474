#include "newspop/featurize.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "newspop/mentions.hpp"
#include "newspop/text.hpp"

namespace newspop {

SentimentLexicon SentimentLexicon::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open lexicon: " + path);
    SentimentLexicon lex;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1 && line == "term,polarity") continue;
        const std::size_t comma = line.rfind(',');
        if (comma == std::string::npos)
            throw DataError("lexicon line " + std::to_string(line_no) + ": expected term,polarity");
        const std::string term = fold_case(line.substr(0, comma));
        const std::string pol = line.substr(comma + 1);
        Polarity p;
        if (pol == "positive") p = Polarity::positive;
        else if (pol == "negative") p = Polarity::negative;
        else if (pol == "neutral") p = Polarity::neutral;
        else
            throw DataError("lexicon line " + std::to_string(line_no) + ": bad polarity '" + pol +
                            "'");
        lex.map_[term] = p;
    }
    return lex;
}

SentimentLexicon SentimentLexicon::from_entries(
    const std::vector<std::pair<std::string, Polarity>>& entries) {
    SentimentLexicon lex;
    for (const auto& [term, p] : entries) lex.map_[fold_case(term)] = p;
    return lex;
}

namespace layout {

const std::vector<std::string>& column_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        n.reserve(kDim);
        n.emplace_back("signal_news");
        n.emplace_back("signal_news_prev_partial");
        n.emplace_back("signal_news_prev_full");
        n.emplace_back("signal_title_mentions");
        n.emplace_back("signal_avg_body_len");
        n.emplace_back("signal_sources");
        for (const char* d : {"mon", "tue", "wed", "thu", "fri", "sat", "sun"})
            n.push_back(std::string("signal_weekday_") + d);
        n.emplace_back("signal_is_weekend");
        for (int i = 0; i < kLatentRank; ++i) n.push_back("textual_svd_" + std::to_string(i));
        for (int i = 0; i < kLatentRank; ++i) n.push_back("textual_lda_" + std::to_string(i));
        n.emplace_back("sentiment_pos");
        n.emplace_back("sentiment_neg");
        n.emplace_back("sentiment_neu");
        n.emplace_back("sentiment_ratio");
        n.emplace_back("sentiment_diff");
        n.emplace_back("sentiment_subjectivity");
        for (int i = 0; i < kLatentRank; ++i) n.push_back("sentiment_svd_" + std::to_string(i));
        n.emplace_back("semantic_entities");
        n.emplace_back("semantic_tags");
        for (int i = 0; i < kLatentRank; ++i) n.push_back("semantic_entity_svd_" + std::to_string(i));
        for (int i = 0; i < kLatentRank; ++i) n.push_back("semantic_tag_svd_" + std::to_string(i));
        return n;
    }();
    return names;
}

}  // namespace layout

std::vector<int> FeatureGroupSet::columns() const {
    std::vector<int> cols;
    auto push = [&](int off, int count) {
        for (int i = 0; i < count; ++i) cols.push_back(off + i);
    };
    if (has(FeatureGroup::signal)) push(layout::kSignalOffset, layout::kSignalCount);
    if (has(FeatureGroup::textual)) push(layout::kTextualOffset, layout::kTextualCount);
    if (has(FeatureGroup::sentiment)) push(layout::kSentimentOffset, layout::kSentimentCount);
    if (has(FeatureGroup::semantic)) push(layout::kSemanticOffset, layout::kSemanticCount);
    return cols;
}

std::string FeatureGroupSet::to_string() const {
    std::string out;
    auto add = [&](const char* name) {
        if (!out.empty()) out += ",";
        out += name;
    };
    if (has(FeatureGroup::signal)) add("signal");
    if (has(FeatureGroup::textual)) add("textual");
    if (has(FeatureGroup::sentiment)) add("sentiment");
    if (has(FeatureGroup::semantic)) add("semantic");
    return out;
}

FeatureGroupSet parse_feature_groups(const std::string& csv) {
    FeatureGroupSet s{0};
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        std::size_t c = csv.find(',', pos);
        std::string name = csv.substr(pos, c == std::string::npos ? c : c - pos);
        if (name == "signal") s.bits |= static_cast<unsigned>(FeatureGroup::signal);
        else if (name == "textual") s.bits |= static_cast<unsigned>(FeatureGroup::textual);
        else if (name == "sentiment") s.bits |= static_cast<unsigned>(FeatureGroup::sentiment);
        else if (name == "semantic") s.bits |= static_cast<unsigned>(FeatureGroup::semantic);
        else if (name == "all") s.bits = 0xF;
        else if (!name.empty()) throw DataError("unknown feature group: " + name);
        if (c == std::string::npos) break;
        pos = c + 1;
    }
    if (s.bits == 0) throw DataError("no feature groups selected");
    return s;
}

DayDocs build_day_docs(const CorpusIndex& index, const SentimentLexicon& lexicon,
                       const std::string& entity, const CivilDate& day, int t_p,
                       const std::set<std::string>* stopwords) {
    const auto [start, end] = news_feature_interval(day, t_p);
    const std::vector<const NewsDoc*> docs = index.entity_news_between(entity, start, end);

    DayDocs out;
    std::string profile;
    std::set<std::string> entity_set;
    std::set<std::string> tag_set;
    for (const NewsDoc* d : docs) {
        if (!profile.empty()) profile += "\n";
        profile += d->title;
        for (const auto& e : d->entity_ids) {
            out.entity_terms.push_back(e);
            entity_set.insert(e);
        }
        for (const auto& t : d->tags) {
            out.tag_terms.push_back(t);
            tag_set.insert(t);
        }
    }
    out.title_unigrams = split_words(profile);
    if (stopwords && !stopwords->empty()) {
        std::erase_if(out.title_unigrams,
                      [&](const std::string& w) { return stopwords->count(w) > 0; });
        out.title_terms = out.title_unigrams;
        const std::size_t n = out.title_unigrams.size();
        for (std::size_t i = 0; i + 1 < n; ++i)
            out.title_terms.push_back(out.title_unigrams[i] + " " + out.title_unigrams[i + 1]);
    } else {
        out.title_terms = tokenize(profile);
    }
    for (const auto& w : out.title_unigrams)
        if (lexicon.polarity_of(w) != nullptr) out.subjective_terms.push_back(w);
    out.distinct_entities = static_cast<double>(entity_set.size());
    out.distinct_tags = static_cast<double>(tag_set.size());
    return out;
}

std::vector<double> signal_features(const CorpusIndex& index, const std::string& entity,
                                    const CivilDate& day, int t_p) {
    std::vector<double> f(layout::kSignalCount, 0.0);

    const auto [start, end] = news_feature_interval(day, t_p);
    const std::vector<const NewsDoc*> docs = index.entity_news_between(entity, start, end);

    // same partial-interval rule applied to the previous day
    const CivilDate prev = add_days(day, -1);
    const auto [pstart, pend] = news_feature_interval(prev, t_p);
    const std::size_t prev_partial = index.entity_news_between(entity, pstart, pend).size();
    // full previous day; one further back when t_p = 0 covers d_{i-1} already
    const CivilDate full_day = t_p == 0 ? add_days(day, -2) : prev;
    const std::int64_t prev_full = index.entity_day_count(entity, full_day);

    f[0] = static_cast<double>(docs.size());
    f[1] = static_cast<double>(prev_partial);
    f[2] = static_cast<double>(prev_full);
    double title_mentions = 0.0;
    double body_len = 0.0;
    std::set<std::string> sources;
    for (const NewsDoc* d : docs) {
        if (std::binary_search(d->title_entity_ids.begin(), d->title_entity_ids.end(), entity))
            title_mentions += 1.0;
        body_len += static_cast<double>(d->body.size());
        sources.insert(d->source);
    }
    f[3] = title_mentions;
    f[4] = docs.empty() ? 0.0 : body_len / static_cast<double>(docs.size());
    f[5] = static_cast<double>(sources.size());
    f[6 + weekday_index(day)] = 1.0;
    f[13] = is_weekend(day) ? 1.0 : 0.0;
    return f;
}

namespace {

std::vector<int> to_ids(const Vocabulary& vocab, const std::vector<std::string>& tokens) {
    std::vector<int> ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) {
        const int id = vocab.id_of(t);
        if (id >= 0) ids.push_back(id);
    }
    return ids;
}

// Uniform-phi stand-in so folds whose training window has no usable text
// still featurize (theta comes out uniform).
LdaModel uniform_lda(int vocab_size, const LdaOptions& opts) {
    const int v = std::max(1, vocab_size);
    Matrix phi(opts.topics, v);
    for (double& x : phi.a) x = 1.0 / v;
    return LdaModel::from_parts(std::move(phi), opts.alpha, opts.beta, opts.seed,
                                opts.foldin_sweeps);
}

}  // namespace

FeatureContext FeatureContext::fit(const CorpusIndex& index, const SentimentLexicon& lexicon,
                                   const std::string& entity,
                                   std::span<const CivilDate> training_days, int t_p,
                                   const FeaturizeParams& params) {
    FeatureContext ctx;
    ctx.entity_id = entity;
    ctx.t_p = t_p;
    ctx.lexicon = lexicon;
    ctx.stopwords = params.stopwords;

    std::vector<std::vector<std::string>> title_docs, subj_docs, entity_docs, tag_docs;
    title_docs.reserve(training_days.size());
    for (const CivilDate& day : training_days) {
        DayDocs d = build_day_docs(index, lexicon, entity, day, t_p, &ctx.stopwords);
        title_docs.push_back(std::move(d.title_terms));
        subj_docs.push_back(std::move(d.subjective_terms));
        entity_docs.push_back(std::move(d.entity_terms));
        tag_docs.push_back(std::move(d.tag_terms));
    }

    auto fit_block = [&](const std::vector<std::vector<std::string>>& docs, TfidfModel& tfidf,
                         SvdProjector& svd, std::uint64_t seed_salt) {
        tfidf = TfidfModel(Vocabulary::fit(docs, params.max_vocab_terms));
        const SparseMatrix m = tfidf.matrix(docs);
        svd = fit_svd(m, layout::kLatentRank, params.svd_seed + seed_salt, params.svd);
    };
    fit_block(title_docs, ctx.title_tfidf, ctx.title_svd, 1);
    fit_block(subj_docs, ctx.subj_tfidf, ctx.subj_svd, 2);
    fit_block(entity_docs, ctx.entity_tfidf, ctx.entity_svd, 3);
    fit_block(tag_docs, ctx.tag_tfidf, ctx.tag_svd, 4);

    LdaOptions lda_opts = params.lda;
    lda_opts.topics = layout::kLatentRank;
    const Vocabulary& vocab = ctx.title_tfidf.vocabulary();
    std::vector<std::vector<int>> id_docs;
    id_docs.reserve(title_docs.size());
    std::size_t total = 0;
    for (const auto& doc : title_docs) {
        id_docs.push_back(to_ids(vocab, doc));
        total += id_docs.back().size();
    }
    ctx.lda = total == 0 ? uniform_lda(static_cast<int>(vocab.size()), lda_opts)
                         : LdaModel::fit(id_docs, static_cast<int>(vocab.size()), lda_opts);
    return ctx;
}

std::vector<double> FeatureContext::textual_features(const DayDocs& docs) const {
    std::vector<double> f = title_svd.project(title_tfidf.vector(docs.title_terms));
    const std::vector<double> theta =
        lda.infer_theta(to_ids(title_tfidf.vocabulary(), docs.title_terms));
    f.insert(f.end(), theta.begin(), theta.end());
    return f;
}

std::vector<double> FeatureContext::sentiment_features(const DayDocs& docs) const {
    double pos = 0.0, neg = 0.0, neu = 0.0;
    for (const auto& w : docs.title_unigrams) {
        const Polarity* p = lexicon.polarity_of(w);
        if (!p) continue;
        if (*p == Polarity::positive) pos += 1.0;
        else if (*p == Polarity::negative) neg += 1.0;
        else neu += 1.0;
    }
    std::vector<double> f;
    f.reserve(layout::kSentimentCount);
    f.push_back(pos);
    f.push_back(neg);
    f.push_back(neu);
    f.push_back((pos + 1.0) / (neg + 1.0));
    f.push_back(pos - neg);
    const double total = static_cast<double>(docs.title_unigrams.size());
    f.push_back(total > 0.0 ? (pos + neg + neu) / total : 0.0);
    const std::vector<double> latent = subj_svd.project(subj_tfidf.vector(docs.subjective_terms));
    f.insert(f.end(), latent.begin(), latent.end());
    return f;
}

std::vector<double> FeatureContext::semantic_features(const DayDocs& docs) const {
    std::vector<double> f;
    f.reserve(layout::kSemanticCount);
    f.push_back(docs.distinct_entities);
    f.push_back(docs.distinct_tags);
    const std::vector<double> ent = entity_svd.project(entity_tfidf.vector(docs.entity_terms));
    f.insert(f.end(), ent.begin(), ent.end());
    const std::vector<double> tag = tag_svd.project(tag_tfidf.vector(docs.tag_terms));
    f.insert(f.end(), tag.begin(), tag.end());
    return f;
}

FeatureVector FeatureContext::assemble(const CorpusIndex& index, const CivilDate& day) const {
    FeatureVector x;
    x.reserve(layout::kDim);
    const std::vector<double> sig = signal_features(index, entity_id, day, t_p);
    x.insert(x.end(), sig.begin(), sig.end());

    const DayDocs docs = build_day_docs(index, lexicon, entity_id, day, t_p, &stopwords);
    const std::vector<double> tex = textual_features(docs);
    x.insert(x.end(), tex.begin(), tex.end());
    const std::vector<double> sen = sentiment_features(docs);
    x.insert(x.end(), sen.begin(), sen.end());
    const std::vector<double> sem = semantic_features(docs);
    x.insert(x.end(), sem.begin(), sem.end());
    return x;
}

void write_feature_matrix_csv(
    const std::vector<std::tuple<std::string, CivilDate, FeatureVector>>& rows,
    const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write feature matrix: " + path);
    out << "entity,date";
    for (const auto& name : layout::column_names()) out << "," << name;
    out << "\n";
    char buf[40];
    for (const auto& [entity, day, x] : rows) {
        out << entity << "," << to_string(day);
        for (double v : x) {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            out << "," << buf;
        }
        out << "\n";
    }
}

}  // namespace newspop
