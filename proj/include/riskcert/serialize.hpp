#pragma once

#include <string>
#include <vector>

#include "riskcert/estimators.hpp"
#include "riskcert/tail_lab.hpp"

namespace riskcert {

/// Shortest exact decimal is deliberately not used: every float is printed
/// with 17 significant digits so that byte equality of two files implies
/// value equality and vice versa, across any writer that follows the schema.
std::string format_double(double v);

/// Canonical JSON: ASCII-sorted keys, %.17g floats, no whitespace variance,
/// trailing newline. Emitting the same record twice yields identical bytes.
std::string to_canonical_json(const Certificate& cert);
std::string to_csv(const Certificate& cert);

/// Parse a certificate back from its JSON form (accepts any field order).
Certificate certificate_from_json(const std::string& text);

std::string to_canonical_json(const std::vector<TailReport>& reports);
std::string to_csv(const std::vector<TailReport>& reports);

std::string to_canonical_json(const CoverageReport& report);
std::string to_csv(const CoverageReport& report);

std::string to_canonical_json(const BudgetComparison& cmp);
std::string to_csv(const BudgetComparison& cmp);

} // namespace riskcert
