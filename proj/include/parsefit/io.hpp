#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

#include "parsefit/approx.hpp"
#include "parsefit/core.hpp"
#include "parsefit/diagonal.hpp"
#include "parsefit/frame.hpp"

namespace parsefit {

using Json = nlohmann::json;

/// Malformed or schema-violating input document.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// On-disk description of either a dense frame or a diagonal model.
/// Matrix data is row-major; complex entries are two-element [re, im] arrays,
/// real entries plain numbers. Infinite extents are encoded as "inf".
struct FrameDocument {
  std::string schema_version = "1";
  std::string kind;  // "frame" | "diagonal-model"
  Matrix data;
  std::string label;
  DiagonalModel model;

  bool is_frame() const { return kind == "frame"; }
  Frame frame() const;
};

FrameDocument parse_frame_document(const Json& j);
FrameDocument load_frame_document(const std::string& path);
Json to_json(const FrameDocument& doc);
FrameDocument make_matrix_document(const Matrix& m, const std::string& label = "");

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, Index rows, Index cols);

/// FNV-1a hash of a file's raw bytes, as fixed-width hex.
std::string file_digest(const std::string& path);

Json extended_nat_json(const ExtendedNat& n);
Json extended_int_json(const ExtendedInt& n);
ExtendedNat extended_nat_from_json(const Json& j, const char* field);

/// Tolerances with overrides applied from a JSON object mapping tolerance
/// names (tol_rank, tol_group, tol_unitary, tol_recon, tol_commute, tol_half,
/// tol_tie) to values. Unknown names raise SchemaError.
Tolerances tolerances_from_json(const Json& overrides, Tolerances base = {});

}  // namespace parsefit
