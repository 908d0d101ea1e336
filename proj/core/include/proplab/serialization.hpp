#pragma once

#include <string>
#include <vector>

#include "proplab/cocycle.hpp"
#include "proplab/fuchsian.hpp"
#include "proplab/margulis.hpp"

namespace proplab::serialization {

/// Group presentations round-trip through JSON; matrix entries are written as
/// decimal strings with 17 significant digits.
std::string group_to_json(const fuchsian::GroupPresentation& grp);
fuchsian::GroupPresentation group_from_json(const std::string& text);

std::string certificate_to_json(const margulis::ObstructionCertificate& cert);
margulis::ObstructionCertificate certificate_from_json(const std::string& text);

/// CSV columns: word; length; integral_f; mu_direct; mu_integral.
std::string reports_to_csv(const std::vector<cocycle::GeodesicLoopReport>& reports);
std::string reports_to_json(const std::vector<cocycle::GeodesicLoopReport>& reports);

}  // namespace proplab::serialization
