#pragma once

#include <string>

#include "sentord/model.hpp"
#include "sentord/optim.hpp"

namespace sentord {

/// Binary model file: magic "SORD", u32 version, length-prefixed JSON header,
/// little-endian f64 parameter blocks in ModelBundle::params() order, an
/// optional optimizer-state section, and a trailing FNV-1a checksum over
/// everything between magic and checksum.
void save_model(const std::string& path, const ModelBundle& m,
                const AdadeltaState* optimizer = nullptr);

struct LoadedModel {
    ModelBundle model;
    bool has_optimizer = false;
    AdadeltaState optimizer;
};

LoadedModel load_model(const std::string& path);

inline constexpr std::uint32_t kModelFormatVersion = 1;

}  // namespace sentord
