#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ctxlab/correlation_inequality.hpp"
#include "ctxlab/model.hpp"

namespace ctxlab {

struct CorrelationFixture {
  MeasurementCover cover;
  CorrelationInequality inequality;
};

using ZooFixture = std::variant<EmpiricalModel, SupportModel, CorrelationFixture>;

/// Catalogue of worked examples:
///   bell            CHSH-scenario table with entries 1/2, 3/8, 1/8, 0
///   hardy           Hardy's support table (support only)
///   ghz             tripartite GHZ rows abc, ab'c', a'bc', a'b'c, uniform on support
///   pr-box          Popescu-Rohrlich box
///   ks18            18-ray Kochen-Specker cover with ONE(U) supports
///   peres-mermin    Peres-Mermin square, uniform on the parity supports
///   vertex4-322     no-signalling vertex of the (3,2,2) scenario, uniform on support
///   werner-wolf-a2  sum_{i<8} E_i - 3 E_8 <= 4 on the (3,2,2) scenario
std::vector<std::string> zoo_names();
ZooFixture zoo(std::string_view name);

/// The fixture as a probability model; throws DomainError for support-only entries.
EmpiricalModel zoo_model(std::string_view name);
/// The fixture's support (support_of for probability models).
SupportModel zoo_support(std::string_view name);

MeasurementCover ghz_cover();
MeasurementCover ks18_cover();
MeasurementCover peres_mermin_cover();

}  // namespace ctxlab
