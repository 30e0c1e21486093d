#ifndef NULLCOUNT_REPORT_HPP
#define NULLCOUNT_REPORT_HPP

// JSON renderings. nlohmann::json keeps object keys sorted, so dumps are
// byte-stable. Big counts are written as decimal strings.

#include "json.hpp"

#include "nullcount/approx.hpp"
#include "nullcount/query.hpp"
#include "nullcount/reductions.hpp"

#include <string>

namespace nullcount {

inline nlohmann::json to_json(const DichotomyVerdict &v)
{
    return {
        {"setting", {{"table", to_string(v.table)}, {"domain", to_string(v.domain)}}},
        {"problem", to_string(v.problem)},
        {"exact", to_string(v.exact)},
        {"approx", to_string(v.approx)},
        {"witnesses", v.witnesses},
    };
}

inline nlohmann::json to_json(const EstimateReport &r)
{
    return {
        {"estimate", r.estimate.str()},
        {"epsilon", r.epsilon},
        {"delta", r.delta},
        {"samples", r.samples},
        {"seed", r.seed},
        {"events", r.events},
        {"threads", r.threads},
    };
}

/// {kind, graphInvariant, sideFactors, query, problem}: the invariant equals
/// offset + scale * count.
inline nlohmann::json identity_json(const ReductionInstance &r)
{
    return {
        {"kind", r.kind},
        {"graphInvariant", r.identity.invariant},
        {"sideFactors", {{"offset", r.identity.offset.str()}, {"scale", r.identity.scale.str()}}},
        {"query", to_string(r.query)},
        {"problem", to_string(r.problem)},
    };
}

inline std::string dump(const nlohmann::json &j) { return j.dump(2) + "\n"; }

} // namespace nullcount

#endif
