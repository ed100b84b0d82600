#pragma once

#include "drx/graph_sum.hpp"
#include "drx/pullback.hpp"

namespace drx {

// The twisted-kernel route to the same class: constant term of the
// prestable graph sum at the request's degree, pulled back along the
// degree-to-curve-class substitution rules. Agrees with compute_P_constant;
// exercised as a cross-module identity.
inline TautClass compute_P_via_twisted_kernel(const DRRequest& req,
                                              const EngineOptions& opt = {}) {
    auto prestable =
        enumerate_prestable_graphs(req.g, req.n, req.A, req.beta, req.target, req.degree);
    long long r_min = opt.r_min_override > 0 ? opt.r_min_override
                                             : default_r_min(req.A, req.beta, req.target);
    auto kernel = chiodo_constant_class(req.g, req.n, prestable, req.degree, r_min, opt);
    return pullback_piZ(kernel, req.A, req.beta, req.target);
}

}  // namespace drx
