#pragma once

#include <string>

#include "json.hpp"
#include "twd/apps.hpp"
#include "twd/decompose.hpp"
#include "twd/well_linked.hpp"

namespace twd {

using ordered_json = nlohmann::ordered_json;

ordered_json certificate_to_json(const TwCertificate &c);
TwCertificate certificate_from_json(const ordered_json &j);

/// terminal ids, alpha, verification mode and a digest of the sampled
/// witness sides
ordered_json well_linked_certificate_to_json(const WellLinkedCertificate &c);

ordered_json decomposition_to_json(const DecompositionResult &res);

ordered_json ep_outcome_to_json(const EPOutcome &out);

/// Replays every claim in a report against the graph: decompose reports
/// check disjointness, certificate replay and bound >= r; ep reports check
/// packing/cover soundness.
struct VerifyOutcome {
  bool ok = true;
  std::vector<std::string> problems;
};
VerifyOutcome verify_report(const Graph &g, const ordered_json &report);

}  // namespace twd
