#include "markovmono/io.hpp"

#include "markovmono/errors.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace markovmono::io {

namespace {

std::string where(std::size_t i, std::size_t j) {
  return "matrix[" + std::to_string(i) + "][" + std::to_string(j) + "]";
}

Json number_or_null(double x) {
  return std::isfinite(x) ? Json(round_significant(x, 12)) : Json(nullptr);
}

std::size_t index_field(const Json& doc, const char* key) {
  if (!doc.contains(key)) throw FormatError(std::string("missing field \"") + key + "\"");
  const Json& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw FormatError(std::string("field \"") + key + "\" must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

DocumentKind detect_kind(const Json& doc) {
  if (!doc.is_object()) throw FormatError("document must be a JSON object");
  if (doc.contains("matrix")) return DocumentKind::Chain;
  if (doc.contains("c")) return DocumentKind::Perturbation;
  throw FormatError("document has neither a \"matrix\" nor a \"c\" field");
}

TransitionMatrix chain_from_json(const Json& doc, double tolerance) {
  if (!doc.is_object() || !doc.contains("matrix")) throw FormatError("missing field \"matrix\"");
  const Json& rows = doc.at("matrix");
  if (!rows.is_array()) throw FormatError("\"matrix\" must be an array of rows");

  const std::size_t n = rows.size();
  std::vector<std::vector<double>> raw(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Json& row = rows[i];
    if (!row.is_array()) throw FormatError("matrix[" + std::to_string(i) + "] is not an array");
    if (row.size() != n) throw NotSquare(i, row.size(), n);
    raw[i].reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      if (!row[j].is_number()) throw FormatError(where(i, j) + " is not a number");
      raw[i].push_back(row[j].get<double>());
    }
  }

  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    const Json& l = doc.at("labels");
    if (!l.is_array()) throw FormatError("\"labels\" must be an array of strings");
    for (std::size_t k = 0; k < l.size(); ++k) {
      if (!l[k].is_string()) throw FormatError("labels[" + std::to_string(k) + "] is not a string");
      labels.push_back(l[k].get<std::string>());
    }
  }
  return validate(raw, tolerance, std::move(labels));
}

Json chain_to_json(const TransitionMatrix& matrix) {
  Json doc = Json::object();
  if (!matrix.labels().empty()) doc["labels"] = matrix.labels();
  doc["matrix"] = matrix.rows();
  return doc;
}

ElementaryPerturbation perturbation_from_json(const Json& doc) {
  if (!doc.is_object()) throw FormatError("perturbation must be a JSON object");
  ElementaryPerturbation pert;
  pert.spec.target = StateIndex{index_field(doc, "target")};
  pert.spec.donor = StateIndex{index_field(doc, "donor")};
  if (!doc.contains("c") || !doc.at("c").is_array()) throw FormatError("\"c\" must be an array");
  const Json& c = doc.at("c");
  pert.c.resize(static_cast<Eigen::Index>(c.size()));
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!c[i].is_number()) throw FormatError("c[" + std::to_string(i) + "] is not a number");
    pert.c(static_cast<Eigen::Index>(i)) = c[i].get<double>();
  }
  return pert;
}

Json perturbation_to_json(const ElementaryPerturbation& pert) {
  Json doc = Json::object();
  doc["target"] = pert.spec.target.value;
  doc["donor"] = pert.spec.donor.value;
  doc["c"] = std::vector<double>(pert.c.data(), pert.c.data() + pert.c.size());
  return doc;
}

Json report_to_json(const VerificationReport& report) {
  Json failures = Json::array();
  for (const auto& f : report.failures) {
    Json observed = Json::object();
    for (const auto& [name, value] : f.observed) observed[name] = number_or_null(value);
    failures.push_back({{"seed", f.trial.seed},
                        {"trial", f.trial.trial},
                        {"n", f.trial.n},
                        {"s0", f.trial.s0},
                        {"donor", f.trial.donor},
                        {"property", f.property},
                        {"observed", std::move(observed)},
                        {"message", f.message}});
  }
  Json doc = Json::object();
  doc["pass"] = report.pass;
  doc["trials"] = report.trials_run;
  doc["failures"] = std::move(failures);
  doc["min_gap"] = report.min_gap ? number_or_null(*report.min_gap) : Json(nullptr);
  return doc;
}

double round_significant(double x, int digits) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

}  // namespace markovmono::io
