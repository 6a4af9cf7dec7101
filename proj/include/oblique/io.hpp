#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "oblique/shift_invariant.hpp"
#include "oblique/types.hpp"

namespace oblique::io {

/// Frame JSON: { "dim": d, "vectors": [ [[re,im], ...], ... ],
///               "subspace": optional [ [[re,im], ...], ... ] }.
struct FrameRecord {
    FiniteFrame frame;
    std::optional<Subspace> subspace;

    /// The attached subspace, or span of the frame vectors.
    Subspace space() const { return subspace ? *subspace : frame.span(); }
};

nlohmann::json frame_to_json(const FiniteFrame& frame,
                             const std::optional<Subspace>& subspace = std::nullopt);
FrameRecord frame_from_json(const nlohmann::json& j);

/// A pair file: { "F": frame, "G": frame }.
struct FramePairRecord {
    FrameRecord f;
    FrameRecord g;
};
FramePairRecord frame_pair_from_json(const nlohmann::json& j);

/// CSV with header gamma,re,im.
std::string periodic_to_csv(const si::PeriodicFunction& p);
si::PeriodicFunction periodic_from_csv(const std::string& text);

nlohmann::json periodic_to_json(const si::PeriodicFunction& p);

/// Generator spec strings: "bspline:m" or "csv:PATH:DECAY_EXPONENT"
/// (tabulated xi,re,im with linear interpolation).
si::GeneratorSpec parse_generator(const std::string& spec);

/// Fixed 15-significant-digit float formatting used by all CSV output.
std::string format_double(double x);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace oblique::io
