#pragma once

#include <string>
#include <vector>

#include "bdsep/chain.hpp"
#include "bdsep/cutoff.hpp"
#include "bdsep/families.hpp"

namespace bdsep {

// Chain documents are {"m": states-1, "p": [...], "q": [...], "r": [...]}.
// Rates are written with enough digits to round-trip exactly.  Malformed
// documents raise IoError; structurally sound documents with invalid rates
// fall through to the chain constructor's checks.
std::string chain_to_json(const BirthDeathChain& chain);
BirthDeathChain chain_from_json(const std::string& text);

// Family documents are {"kind": "...", "params": {...}}.
std::string family_to_json(const FamilySpec& spec);
FamilySpec family_from_json(const std::string& text);

// Either a bare array of family documents or {"families": [...]}.
std::vector<FamilySpec> families_from_json(const std::string& text);

std::string scan_report_json(const ScanReport& report);

}  // namespace bdsep
