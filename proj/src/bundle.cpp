#include "newspop/bundle.hpp"

#include <cstring>
#include <fstream>
#include <map>

#include <json.hpp>

namespace newspop {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'N', 'P', 'B', 'D', '0', '0', '0', '1'};

class BlobWriter {
public:
    json add(const std::string& name, const double* data, std::size_t count) {
        json ref;
        ref["blob"] = name;
        ref["offset"] = payload_.size() / sizeof(double);
        ref["count"] = count;
        const std::size_t bytes = count * sizeof(double);
        const std::size_t old = payload_.size();
        payload_.resize(old + bytes);
        std::memcpy(payload_.data() + old, data, bytes);
        return ref;
    }
    const std::vector<std::uint8_t>& payload() const { return payload_; }

private:
    std::vector<std::uint8_t> payload_;
};

class BlobReader {
public:
    BlobReader(const std::uint8_t* data, std::size_t bytes) : data_(data), bytes_(bytes) {}

    std::vector<double> read(const json& ref) const {
        const std::size_t offset = ref.at("offset").get<std::size_t>();
        const std::size_t count = ref.at("count").get<std::size_t>();
        if ((offset + count) * sizeof(double) > bytes_)
            throw DataError("model bundle: blob out of range");
        std::vector<double> out(count);
        std::memcpy(out.data(), data_ + offset * sizeof(double), count * sizeof(double));
        return out;
    }

private:
    const std::uint8_t* data_;
    std::size_t bytes_;
};

json tfidf_to_json(const TfidfModel& m, const std::string& prefix, BlobWriter& blobs) {
    json j;
    j["terms"] = m.vocabulary().terms();
    j["df"] = m.vocabulary().document_frequencies();
    j["n_train_docs"] = m.vocabulary().n_train_docs();
    j["idf"] = blobs.add(prefix + ".idf", m.idf().data(), m.idf().size());
    return j;
}

TfidfModel tfidf_from_json(const json& j, const BlobReader& blobs) {
    Vocabulary vocab = Vocabulary::from_parts(j.at("terms").get<std::vector<std::string>>(),
                                              j.at("df").get<std::vector<std::int64_t>>(),
                                              j.at("n_train_docs").get<std::int64_t>());
    return TfidfModel::from_parts(std::move(vocab), blobs.read(j.at("idf")));
}

json svd_to_json(const SvdProjector& p, const std::string& prefix, BlobWriter& blobs) {
    json j;
    j["rank"] = p.rank;
    j["rank_eff"] = p.rank_eff;
    j["rows"] = p.V.rows;
    j["v"] = blobs.add(prefix + ".v", p.V.a.data(), p.V.a.size());
    j["sigma"] = blobs.add(prefix + ".sigma", p.sigma.data(), p.sigma.size());
    return j;
}

SvdProjector svd_from_json(const json& j, const BlobReader& blobs) {
    SvdProjector p;
    p.rank = j.at("rank").get<int>();
    p.rank_eff = j.at("rank_eff").get<int>();
    p.V = Matrix(j.at("rows").get<int>(), p.rank_eff);
    p.V.a = blobs.read(j.at("v"));
    if (p.V.a.size() != static_cast<std::size_t>(p.V.rows) * p.rank_eff)
        throw DataError("model bundle: V dimensions mismatch");
    p.sigma = blobs.read(j.at("sigma"));
    return p;
}

const char* polarity_name(Polarity p) {
    switch (p) {
        case Polarity::positive: return "positive";
        case Polarity::negative: return "negative";
        default: return "neutral";
    }
}

Polarity polarity_from(const std::string& s) {
    if (s == "positive") return Polarity::positive;
    if (s == "negative") return Polarity::negative;
    return Polarity::neutral;
}

}  // namespace

std::vector<std::uint8_t> ModelBundle::serialize() const {
    BlobWriter blobs;
    json m;
    m["format"] = "newspop-bundle";
    m["version"] = 1;
    m["entity"] = entity_id;
    m["t_p"] = t_p;
    m["k"] = policy.k;
    m["delta"] = policy.delta;
    m["feature_groups"] = groups.to_string();
    m["train_start"] = to_string(train_start);
    m["train_end"] = to_string(train_end);

    m["tfidf_title"] = tfidf_to_json(context.title_tfidf, "title", blobs);
    m["svd_title"] = svd_to_json(context.title_svd, "title", blobs);
    m["tfidf_subj"] = tfidf_to_json(context.subj_tfidf, "subj", blobs);
    m["svd_subj"] = svd_to_json(context.subj_svd, "subj", blobs);
    m["tfidf_entity"] = tfidf_to_json(context.entity_tfidf, "entity", blobs);
    m["svd_entity"] = svd_to_json(context.entity_svd, "entity", blobs);
    m["tfidf_tag"] = tfidf_to_json(context.tag_tfidf, "tag", blobs);
    m["svd_tag"] = svd_to_json(context.tag_svd, "tag", blobs);

    json lda;
    lda["topics"] = context.lda.topics();
    lda["vocab_size"] = context.lda.vocab_size();
    lda["alpha"] = context.lda.alpha();
    lda["beta"] = context.lda.beta();
    lda["seed"] = context.lda.seed();
    lda["phi"] = blobs.add("lda.phi", context.lda.phi().a.data(), context.lda.phi().a.size());
    lda["foldin_sweeps"] = context.lda.foldin_sweeps();
    m["lda"] = lda;

    // lexicon entries sorted for stable bytes
    std::map<std::string, std::string> lex;
    for (const auto& [term, p] : context.lexicon.entries()) lex[term] = polarity_name(p);
    m["lexicon"] = lex;
    m["stopwords"] = context.stopwords;  // std::set serializes sorted

    json cls;
    cls["fit_intercept"] = model.fit_intercept;
    cls["C"] = model.config.C;
    cls["tolerance"] = model.config.tolerance;
    cls["max_iterations"] = model.config.max_iterations;
    cls["single_class_warning"] = model.single_class_warning;
    cls["iterations"] = model.iterations;
    cls["converged"] = model.converged;
    cls["w"] = blobs.add("cls.w", model.w.data(), model.w.size());
    cls["mean"] = blobs.add("cls.mean", model.standardizer.mean.data(),
                            model.standardizer.mean.size());
    cls["scale"] = blobs.add("cls.scale", model.standardizer.scale.data(),
                             model.standardizer.scale.size());
    m["classifier"] = cls;

    const std::string manifest = m.dump();
    std::vector<std::uint8_t> out;
    out.reserve(sizeof(kMagic) + 8 + manifest.size() + blobs.payload().size());
    out.insert(out.end(), kMagic, kMagic + sizeof(kMagic));
    std::uint64_t len = manifest.size();
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>((len >> (8 * i)) & 0xFF));
    out.insert(out.end(), manifest.begin(), manifest.end());
    out.insert(out.end(), blobs.payload().begin(), blobs.payload().end());
    return out;
}

ModelBundle ModelBundle::deserialize(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < sizeof(kMagic) + 8 ||
        std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
        throw DataError("not a model bundle (bad magic)");
    std::uint64_t len = 0;
    for (int i = 0; i < 8; ++i)
        len |= static_cast<std::uint64_t>(bytes[sizeof(kMagic) + i]) << (8 * i);
    const std::size_t manifest_start = sizeof(kMagic) + 8;
    if (manifest_start + len > bytes.size()) throw DataError("model bundle truncated");
    const json m = json::parse(bytes.begin() + manifest_start, bytes.begin() + manifest_start + len,
                               nullptr, false);
    if (m.is_discarded()) throw DataError("model bundle: bad manifest JSON");
    if (m.value("format", "") != "newspop-bundle" || m.value("version", 0) != 1)
        throw DataError("model bundle: unsupported format/version");
    const BlobReader blobs(bytes.data() + manifest_start + len,
                           bytes.size() - manifest_start - len);
    try {
    ModelBundle b;
    b.entity_id = m.at("entity").get<std::string>();
    b.t_p = m.at("t_p").get<int>();
    b.policy.k = m.at("k").get<double>();
    b.policy.delta = m.at("delta").get<std::int64_t>();
    b.groups = parse_feature_groups(m.at("feature_groups").get<std::string>());
    if (auto d = parse_date(m.at("train_start").get<std::string>())) b.train_start = *d;
    if (auto d = parse_date(m.at("train_end").get<std::string>())) b.train_end = *d;

    b.context.entity_id = b.entity_id;
    b.context.t_p = b.t_p;
    b.context.title_tfidf = tfidf_from_json(m.at("tfidf_title"), blobs);
    b.context.title_svd = svd_from_json(m.at("svd_title"), blobs);
    b.context.subj_tfidf = tfidf_from_json(m.at("tfidf_subj"), blobs);
    b.context.subj_svd = svd_from_json(m.at("svd_subj"), blobs);
    b.context.entity_tfidf = tfidf_from_json(m.at("tfidf_entity"), blobs);
    b.context.entity_svd = svd_from_json(m.at("svd_entity"), blobs);
    b.context.tag_tfidf = tfidf_from_json(m.at("tfidf_tag"), blobs);
    b.context.tag_svd = svd_from_json(m.at("svd_tag"), blobs);

    const json& lda = m.at("lda");
    Matrix phi(lda.at("topics").get<int>(), lda.at("vocab_size").get<int>());
    phi.a = blobs.read(lda.at("phi"));
    if (phi.a.size() != static_cast<std::size_t>(phi.rows) * phi.cols)
        throw DataError("model bundle: phi dimensions mismatch");
    b.context.lda = LdaModel::from_parts(std::move(phi), lda.at("alpha").get<double>(),
                                         lda.at("beta").get<double>(),
                                         lda.at("seed").get<std::uint64_t>(),
                                         lda.value("foldin_sweeps", 100));

    std::vector<std::pair<std::string, Polarity>> lex;
    for (const auto& [term, pol] : m.at("lexicon").items())
        lex.emplace_back(term, polarity_from(pol.get<std::string>()));
    b.context.lexicon = SentimentLexicon::from_entries(lex);
    if (m.contains("stopwords"))
        b.context.stopwords = m.at("stopwords").get<std::set<std::string>>();

    const json& cls = m.at("classifier");
    b.model.fit_intercept = cls.at("fit_intercept").get<bool>();
    b.model.config.C = cls.at("C").get<double>();
    b.model.config.tolerance = cls.at("tolerance").get<double>();
    b.model.config.max_iterations = cls.at("max_iterations").get<int>();
    b.model.config.fit_intercept = b.model.fit_intercept;
    b.model.single_class_warning = cls.at("single_class_warning").get<bool>();
    b.model.iterations = cls.at("iterations").get<int>();
    b.model.converged = cls.at("converged").get<bool>();
    b.model.w = blobs.read(cls.at("w"));
    b.model.standardizer.mean = blobs.read(cls.at("mean"));
    b.model.standardizer.scale = blobs.read(cls.at("scale"));
    return b;
    } catch (const json::exception& e) {
        throw DataError(std::string("model bundle: malformed manifest: ") + e.what());
    }
}

void ModelBundle::save(const std::string& path) const {
    const std::vector<std::uint8_t> bytes = serialize();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write model bundle: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

ModelBundle ModelBundle::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model bundle: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return deserialize(bytes);
}

std::vector<double> ModelBundle::features_for(const CorpusIndex& index,
                                              const CivilDate& day) const {
    const FeatureVector full = context.assemble(index, day);
    std::vector<double> out;
    const std::vector<int> cols = groups.columns();
    out.reserve(cols.size());
    for (int c : cols) out.push_back(full[c]);
    return out;
}

double ModelBundle::predict_proba(const CorpusIndex& index, const CivilDate& day) const {
    return model.predict_proba(features_for(index, day));
}

}  // namespace newspop
