#pragma once

#include "gbr/container.hpp"
#include "gbr/graph.hpp"
#include "gbr/scene.hpp"

namespace gbr {

// End-to-end graph-based coding. The encoder mirrors the decoder's state
// exactly (coded reference, losslessly coded new pixels, residuals
// applied level by level), so reconstructions never drift, including
// for the views interpolated at the decoder when levels were dropped.

struct GbrConfig {
    std::vector<int> levels;  // 1-based included view indices, must start at 1
    int q_ref = 0;            // 0 = lossless reference, else block codec step
    int q_res = 1;            // 0 = no residual sections
};

Container gbr_encode(const Dataset& ds, const GbrConfig& cfg,
                     std::vector<Image8>* recon_out = nullptr);
std::vector<Image8> gbr_decode(const Container& c);

/// Dispatch on the container's payload (GBR sections or DIPP).
std::vector<Image8> decode_views(const Container& c);

struct RateBreakdown {
    int64_t geometry_bits = 0;
    int64_t texture_bits = 0;
    int64_t residual_bits = 0;

    int64_t total() const { return geometry_bits + texture_bits + residual_bits; }
};

/// Splits the payload into geometry, texture and residual components;
/// the three sum to the serialized size minus container framing.
RateBreakdown rate_breakdown(const Container& c);

}  // namespace gbr
