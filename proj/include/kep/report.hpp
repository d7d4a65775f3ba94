// SPDX-License-Identifier: Apache-2.0

#ifndef KEP_REPORT_HPP
#define KEP_REPORT_HPP

#include <ostream>
#include <string>
#include <string_view>
#include "kep/driver.hpp"

namespace kep
{

// Bumped whenever a field is renamed, removed or changes meaning.
inline constexpr std::string_view kReportSchema = "kep.report/1";

enum class ReportFormat
{
  Json,
  Text
};

// Keys appear in a fixed order and numbers use shortest round-trip formatting, so equal
// reports serialize to equal bytes.
std::string EmitJson(const SolveReport &report);
SolveReport ParseJson(std::string_view text);

std::string EmitText(const SolveReport &report);

void EmitReport(const SolveReport &report, ReportFormat format, std::ostream &out);

std::string_view StatusName(SolveStatus status);

}  // namespace kep

#endif  // KEP_REPORT_HPP
