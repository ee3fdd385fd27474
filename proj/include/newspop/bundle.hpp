#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "newspop/civil.hpp"
#include "newspop/classifier.hpp"
#include "newspop/featurize.hpp"
#include "newspop/labeling.hpp"

namespace newspop {

// Everything needed to reproduce a fold's predictions bit-for-bit: the
// fitted feature context, label policy, classifier weights and
// standardization, plus identifying metadata.
//
// On disk: magic, little-endian u64 manifest length, JSON manifest, then the
// double arrays referenced by the manifest as raw little-endian IEEE-754.
struct ModelBundle {
    std::string entity_id;
    int t_p = 0;
    LabelPolicy policy;
    FeatureGroupSet groups = FeatureGroupSet::all();
    CivilDate train_start;
    CivilDate train_end;

    FeatureContext context;
    TrainedModel model;

    std::vector<std::uint8_t> serialize() const;
    static ModelBundle deserialize(const std::vector<std::uint8_t>& bytes);

    void save(const std::string& path) const;
    static ModelBundle load(const std::string& path);

    // Features restricted to the bundle's feature groups, in column order.
    std::vector<double> features_for(const CorpusIndex& index, const CivilDate& day) const;
    double predict_proba(const CorpusIndex& index, const CivilDate& day) const;
};

}  // namespace newspop
