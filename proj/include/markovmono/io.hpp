#pragma once

#include "markovmono/chain.hpp"
#include "markovmono/perturbation.hpp"
#include "markovmono/verify.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

namespace markovmono::io {

using Json = nlohmann::ordered_json;

enum class DocumentKind { Chain, Perturbation };

/// Reads and parses a JSON file. Throws FormatError.
Json read_json_file(const std::filesystem::path& path);

/// "matrix" key -> Chain, "c" key -> Perturbation, else FormatError.
DocumentKind detect_kind(const Json& doc);

/// {"labels": [...] (optional), "matrix": [[...], ...]}. Structural problems
/// raise FormatError naming the offending row/entry; numeric ones raise the
/// validate() errors.
TransitionMatrix chain_from_json(const Json& doc, double tolerance = kDefaultRowTolerance);
Json chain_to_json(const TransitionMatrix& matrix);

/// {"target": int, "donor": int, "c": [floats]}
ElementaryPerturbation perturbation_from_json(const Json& doc);
Json perturbation_to_json(const ElementaryPerturbation& pert);

/// {"pass": bool, "trials": int, "failures": [...], "min_gap": float|null}
Json report_to_json(const VerificationReport& report);

/// x rounded to `digits` significant decimal digits (non-finite passes through).
double round_significant(double x, int digits);

}  // namespace markovmono::io
