#include "parsefit/io.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

namespace parsefit {

namespace {

Scalar entry_from_json(const Json& e) {
  if (e.is_number()) return Scalar(e.get<double>(), 0.0);
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return Scalar(e[0].get<double>(), e[1].get<double>());
  throw SchemaError("matrix entry must be a number or an [re, im] pair");
}

double nonnegative_number(const Json& e, const char* field) {
  if (!e.is_number())
    throw SchemaError(std::string(field) + ": expected a number");
  const double v = e.get<double>();
  if (!(v >= 0.0))
    throw SchemaError(std::string(field) + ": expected a nonnegative number");
  return v;
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  bool complex = false;
  for (Index i = 0; i < m.rows() && !complex; ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (m(i, j).imag() != 0.0) {
        complex = true;
        break;
      }
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      if (complex)
        row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
      else
        row.push_back(m(i, j).real());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, Index rows, Index cols) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows)
    throw SchemaError("data: expected " + std::to_string(rows) + " rows");
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw SchemaError("data: row " + std::to_string(i) + " must have " +
                        std::to_string(cols) + " entries");
    for (Index c = 0; c < cols; ++c)
      m(i, c) = entry_from_json(row[static_cast<std::size_t>(c)]);
  }
  if (!all_finite(m)) throw SchemaError("data: entries must be finite");
  return m;
}

Json extended_nat_json(const ExtendedNat& n) {
  if (n.is_inf()) return "inf";
  return n.value();
}

Json extended_int_json(const ExtendedInt& n) {
  if (!n.is_finite()) return n.str();
  return n.value();
}

ExtendedNat extended_nat_from_json(const Json& j, const char* field) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return ExtendedNat::inf();
    throw SchemaError(std::string(field) + R"(: expected a count or "inf")");
  }
  if (j.is_number_unsigned()) return ExtendedNat(j.get<std::uint64_t>());
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
    return ExtendedNat(static_cast<std::uint64_t>(j.get<std::int64_t>()));
  throw SchemaError(std::string(field) + R"(: expected a count or "inf")");
}

FrameDocument parse_frame_document(const Json& j) {
  if (!j.is_object()) throw SchemaError("document must be a JSON object");
  FrameDocument doc;
  if (!j.contains("schemaVersion") || !j["schemaVersion"].is_string())
    throw SchemaError("missing schemaVersion");
  doc.schema_version = j["schemaVersion"].get<std::string>();
  if (!j.contains("kind") || !j["kind"].is_string())
    throw SchemaError("missing kind");
  doc.kind = j["kind"].get<std::string>();
  doc.label = j.value("label", std::string{});

  if (doc.kind == "frame") {
    for (const char* field : {"rows", "cols", "data"})
      if (!j.contains(field))
        throw SchemaError(std::string("frame document: missing ") + field);
    for (const char* field :
         {"exceptional", "tailOnes", "kernelDim", "cokernelDim", "tailConverges"})
      if (j.contains(field))
        throw SchemaError(std::string("frame document: unexpected field ") + field);
    if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer())
      throw SchemaError("rows/cols must be integers");
    const auto rows = j["rows"].get<std::int64_t>();
    const auto cols = j["cols"].get<std::int64_t>();
    if (rows < 0 || cols < 1)
      throw SchemaError("frame document: need rows >= 0 and cols >= 1");
    doc.data = matrix_from_json(j["data"], static_cast<Index>(rows),
                                static_cast<Index>(cols));
    return doc;
  }

  if (doc.kind == "diagonal-model") {
    for (const char* field :
         {"exceptional", "tailOnes", "kernelDim", "cokernelDim", "tailConverges"})
      if (!j.contains(field))
        throw SchemaError(std::string("diagonal-model document: missing ") + field);
    for (const char* field : {"rows", "cols", "data"})
      if (j.contains(field))
        throw SchemaError(std::string("diagonal-model document: unexpected field ") +
                          field);
    if (!j["exceptional"].is_array())
      throw SchemaError("exceptional: expected an array");
    for (const Json& e : j["exceptional"])
      doc.model.exceptional.push_back(nonnegative_number(e, "exceptional"));
    doc.model.tail_ones = extended_nat_from_json(j["tailOnes"], "tailOnes");
    doc.model.kernel_dim = extended_nat_from_json(j["kernelDim"], "kernelDim");
    doc.model.cokernel_dim = extended_nat_from_json(j["cokernelDim"], "cokernelDim");
    if (!j["tailConverges"].is_boolean())
      throw SchemaError("tailConverges: expected a boolean");
    doc.model.tail_converges = j["tailConverges"].get<bool>();
    try {
      validate_model(doc.model);
    } catch (const DomainError& e) {
      throw SchemaError(e.what());
    }
    return doc;
  }

  throw SchemaError("kind must be \"frame\" or \"diagonal-model\"");
}

FrameDocument load_frame_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open input file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw SchemaError("JSON parse failure in " + path + ": " + e.what());
  }
  return parse_frame_document(j);
}

Json to_json(const FrameDocument& doc) {
  Json j;
  j["schemaVersion"] = doc.schema_version;
  j["kind"] = doc.kind;
  if (!doc.label.empty()) j["label"] = doc.label;
  if (doc.is_frame()) {
    j["rows"] = doc.data.rows();
    j["cols"] = doc.data.cols();
    j["data"] = matrix_to_json(doc.data);
  } else {
    j["exceptional"] = doc.model.exceptional;
    j["tailOnes"] = extended_nat_json(doc.model.tail_ones);
    j["kernelDim"] = extended_nat_json(doc.model.kernel_dim);
    j["cokernelDim"] = extended_nat_json(doc.model.cokernel_dim);
    j["tailConverges"] = doc.model.tail_converges;
  }
  return j;
}

FrameDocument make_matrix_document(const Matrix& m, const std::string& label) {
  FrameDocument doc;
  doc.kind = "frame";
  doc.data = m;
  doc.label = label;
  return doc;
}

Frame FrameDocument::frame() const {
  if (!is_frame()) throw SchemaError("expected a frame document");
  return Frame{data, label};
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open input file: " + path);
  std::uint64_t hash = 0xcbf29ce484222325ull;
  char c;
  while (in.get(c)) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ull;
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << hash;
  return out.str();
}

Tolerances tolerances_from_json(const Json& overrides, Tolerances base) {
  if (!overrides.is_object())
    throw SchemaError("tolerance overrides: expected a JSON object");
  for (const auto& [key, value] : overrides.items()) {
    if (!value.is_number())
      throw SchemaError("tolerance overrides: " + key + " must be a number");
    const double v = value.get<double>();
    if (key == "tol_rank")
      base.rank_rel = v;
    else if (key == "tol_group")
      base.group_rel = v;
    else if (key == "tol_unitary")
      base.unitary = v;
    else if (key == "tol_recon")
      base.recon = v;
    else if (key == "tol_commute")
      base.commute_rel = v;
    else if (key == "tol_half")
      base.half = v;
    else if (key == "tol_tie")
      base.tie = v;
    else
      throw SchemaError("tolerance overrides: unknown name " + key);
  }
  return base;
}

}  // namespace parsefit
