#pragma once

#include <cstddef>
#include <string>

namespace hypervar {

/// A probability with its error measure. For deterministic methods `standardError`
/// holds the truncation bound; for Monte Carlo it is the replicate standard error.
struct TailEstimate {
    double value = 0.0;
    double standardError = 0.0;
    std::string method;
    std::size_t evaluations = 0;
};

}  // namespace hypervar
