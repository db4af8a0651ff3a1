#pragma once

#include <stdexcept>
#include <string>

namespace gwalk {

enum class errc {
    p0_positive,
    sum_not_one,
    mean_not_supercritical,
    bad_support,
    kind_mismatch,
    depth_budget,
    node_budget,
    not_neighbors,
    excursions_exhausted,
    insufficient_blocks,
    category_mismatch,
    empty_samples,
    config_invalid,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::p0_positive: return "P0_POSITIVE";
        case errc::sum_not_one: return "SUM_NOT_ONE";
        case errc::mean_not_supercritical: return "MEAN_NOT_SUPERCRITICAL";
        case errc::bad_support: return "BAD_SUPPORT";
        case errc::kind_mismatch: return "KIND_MISMATCH";
        case errc::depth_budget: return "DEPTH_BUDGET";
        case errc::node_budget: return "NODE_BUDGET";
        case errc::not_neighbors: return "NOT_NEIGHBORS";
        case errc::excursions_exhausted: return "EXCURSIONS_EXHAUSTED";
        case errc::insufficient_blocks: return "INSUFFICIENT_BLOCKS";
        case errc::category_mismatch: return "CATEGORY_MISMATCH";
        case errc::empty_samples: return "EMPTY_SAMPLES";
        case errc::config_invalid: return "CONFIG_INVALID";
    }
    return "UNKNOWN";
}

class error : public std::runtime_error {
  public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

  private:
    errc code_;
};

}  // namespace gwalk
