#include "parsefit/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <set>

#include "parsefit/sampling.hpp"

namespace parsefit {

const char* kHalfThresholdNote =
    "a singular value lies on the 1/2 threshold: the components keeping and "
    "zeroing it attain the same distance, so the classical criterion (at most "
    "one singular value equal to 1/2) does not by itself imply a single "
    "minimizer; tied components are enumerated and reported instead";

namespace {

Json uniqueness_json(Uniqueness u, const ExtendedNat& count) {
  Json j;
  j["kind"] = uniqueness_name(u);
  j["count"] = extended_nat_json(count);
  return j;
}

Json family_kind_json(const MinimizerFamily& family) {
  Json j;
  switch (family.kind) {
    case FamilyKind::unique: j["kind"] = "unique"; break;
    case FamilyKind::finite: j["kind"] = "finitelyMany"; break;
    case FamilyKind::infinite: j["kind"] = "infinitelyMany"; break;
    case FamilyKind::none: j["kind"] = "none"; break;
  }
  j["count"] = extended_nat_json(family.count);
  if (!family.description.empty()) j["family"] = family.description;
  return j;
}

Json sign_sequence_json(const DiagonalModel& model, const SignSequence& seq) {
  Json j;
  j["values"] = seq.values;
  if (!seq.tail_overrides.empty()) j["tailOverrides"] = seq.tail_overrides;
  if (!seq.kernel_overrides.empty()) j["kernelOverrides"] = seq.kernel_overrides;
  if (!model.tail_ones.is_inf() && !model.kernel_dim.is_inf() &&
      model.exceptional.size() + model.tail_ones.value() +
              model.kernel_dim.value() <= 64)
    j["dense"] = flatten_sequence(model, seq);
  return j;
}

Json component_report_json(const ComponentReport& report) {
  Json j;
  j["n1"] = extended_nat_json(report.n1);
  j["n2"] = extended_nat_json(report.n2);
  j["n3"] = extended_nat_json(report.n3);
  j["indexSet"] = {{"lower", extended_int_json(report.lower)},
                   {"upper", extended_int_json(report.upper)}};
  j["quadraticallyCloseNonempty"] = report.quadratically_close_nonempty;
  return j;
}

Json approximation_json(const ApproximationResult& res, bool include_matrix) {
  Json j;
  j["k"] = res.k;
  j["squaredDistance"] = res.squared_distance;
  j["uniqueness"] = uniqueness_json(res.uniqueness, res.count);
  if (res.grouping_marginal) j["groupingMarginal"] = true;
  if (include_matrix) j["minimizer"] = matrix_to_json(res.minimizer.synthesis);
  if (res.kernel_family) {
    const auto& fam = *res.kernel_family;
    j["family"] = {{"type", "kernelShift"},
                   {"rank", fam.rank},
                   {"diagonalCount", extended_nat_json(fam.diagonal_count)},
                   {"kernelBasis", matrix_to_json(fam.kernel_basis)},
                   {"cokernelBasis", matrix_to_json(fam.cokernel_basis)}};
  }
  if (res.eigen_family) {
    const auto& fam = *res.eigen_family;
    j["family"] = {{"type", "eigenspaceProjection"},
                   {"e1Rank", fam.e1_rank},
                   {"e0", matrix_to_json(fam.e0)},
                   {"eigenspaceBasis", matrix_to_json(fam.eigenspace_basis)}};
  }
  return j;
}

Json report_header(const std::string& command, const std::string& input_path) {
  Json j;
  j["schemaVersion"] = "1";
  j["command"] = command;
  j["input"] = {{"path", input_path}, {"digest", file_digest(input_path)}};
  return j;
}

/// Window for per-component scans of a diagonal model: the global optimum
/// sits in [0, r] and ties only touch that range, while distances grow by at
/// least 1 per step on the negative side and monotonically past r.
std::pair<std::int64_t, std::int64_t> diagonal_scan_window(
    const ComponentReport& report, int r, int extra) {
  std::int64_t lo = -static_cast<std::int64_t>(extra);
  if (report.lower.is_finite()) lo = std::max(lo, report.lower.value());
  std::int64_t hi = static_cast<std::int64_t>(r) + extra;
  if (report.upper.is_finite()) hi = std::min(hi, report.upper.value());
  return {lo, hi};
}

int half_threshold_count(const DiagonalModel& model, const Tolerances& tol,
                         bool* boundary) {
  int r = 0;
  for (double v : model.exceptional) {
    if (v <= 0.0) continue;
    double snapped = v;
    if (std::abs(v - 0.5) <= tol.half) {
      snapped = 0.5;
      if (boundary) *boundary = true;
    }
    if (snapped <= 0.5) ++r;
  }
  return r;
}

Json diagonal_global_json(const DiagonalModel& model,
                          const ComponentReport& report, const Tolerances& tol) {
  bool boundary = false;
  const int r = half_threshold_count(model, tol, &boundary);
  const auto [lo, hi] = diagonal_scan_window(report, r, 2);

  double best = std::numeric_limits<double>::infinity();
  std::vector<std::pair<int, MinimizerFamily>> scanned;
  for (std::int64_t k = lo; k <= hi; ++k) {
    MinimizerFamily family = minimize_k(model, static_cast<int>(k));
    best = std::min(best, family.value);
    scanned.emplace_back(static_cast<int>(k), std::move(family));
  }

  Json j;
  j["k"] = r;
  j["squaredDistance"] = best;
  j["boundary"] = boundary;
  Json tied = Json::array();
  bool infinite = false;
  std::uint64_t total = 0;
  const MinimizerFamily* representative_family = nullptr;
  for (const auto& [k, family] : scanned) {
    if (family.value > best + tol.tie) continue;
    tied.push_back(k);
    if (family.count.is_inf())
      infinite = true;
    else
      total += family.count.value();
    if (k == r) representative_family = &family;
  }
  j["tiedComponents"] = tied;
  Json uniq;
  if (infinite) {
    uniq["kind"] = "infinitelyMany";
    uniq["count"] = "inf";
  } else if (total <= 1) {
    uniq["kind"] = "unique";
    uniq["count"] = 1;
  } else {
    uniq["kind"] = "finitelyMany";
    uniq["count"] = total;
  }
  j["uniqueness"] = uniq;
  if (representative_family) {
    Json reps = Json::array();
    std::size_t shown = 0;
    for (const auto& rep : representative_family->representatives) {
      if (shown++ >= 8) break;
      reps.push_back(sign_sequence_json(model, rep));
    }
    j["representatives"] = reps;
  }
  if (boundary) j["note"] = kHalfThresholdNote;
  return j;
}

/// Effective diagonal sequence of a frame: its singular values with entries
/// at or below the rank tolerance set to exactly zero.
std::vector<double> effective_sequence(const SvdFactorization& s) {
  std::vector<double> a(s.sigma.data(), s.sigma.data() + s.sigma.size());
  for (std::size_t i = static_cast<std::size_t>(s.rank); i < a.size(); ++i)
    a[i] = 0.0;
  return a;
}

Json oracle_cross_check(const Frame& f, const ComponentReport& report,
                        const SvdFactorization& s, const Tolerances& tol) {
  Json j;
  if (s.sigma.size() > 12) {
    j["status"] = "skipped";
    j["reason"] = "more than 12 singular values";
    return j;
  }
  const std::vector<double> a = effective_sequence(s);
  bool all_pass = true;
  Json rows = Json::array();
  for (std::int64_t k = report.lower.value(); k <= report.upper.value(); ++k) {
    const MinimizerFamily oracle = brute_force_oracle(a, static_cast<int>(k));
    const double closed_form = distance_to_component(f, static_cast<int>(k), tol);
    const double diff = std::abs(oracle.value - closed_form);
    const bool pass = diff <= 1e-12;
    all_pass = all_pass && pass;
    rows.push_back({{"k", k},
                    {"oracleValue", oracle.value},
                    {"closedForm", closed_form},
                    {"pass", pass}});
  }
  j["status"] = all_pass ? "pass" : "fail";
  j["perComponent"] = rows;
  return j;
}

void attach_timing(Json& j, std::chrono::steady_clock::time_point start) {
  const auto elapsed = std::chrono::steady_clock::now() - start;
  j["timingMs"] =
      std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
}

Json analyze_frame(const FrameDocument& doc, const std::string& input_path,
                   const AnalyzeOptions& opt, const Tolerances& tol) {
  const auto start = std::chrono::steady_clock::now();
  const Frame f = doc.frame();
  const ComponentReport report = component_report(f, tol);
  const SvdFactorization s = svd(f.synthesis, -1.0, tol);

  Json j = report_header("analyze", input_path);
  j["component"] = component_report_json(report);
  j["singularValues"] = std::vector<double>(s.sigma.data(),
                                            s.sigma.data() + s.sigma.size());
  Json groups = Json::array();
  for (const auto& g : s.groups) groups.push_back(g);
  j["singularValueGroups"] = groups;

  const ApproximationResult global = global_approx(f, tol);

  std::set<std::int64_t> table_ks;
  for (std::int64_t k = std::max<std::int64_t>(report.lower.value(), opt.k_lo);
       k <= std::min<std::int64_t>(report.upper.value(), opt.k_hi); ++k)
    table_ks.insert(k);
  for (int k : global.tied_components) table_ks.insert(k);

  Json per_k = Json::array();
  for (std::int64_t k : table_ks) {
    const ApproximationResult res =
        approx_in_component(f, static_cast<int>(k), tol);
    Json row;
    row["k"] = k;
    row["squaredDistance"] = res.squared_distance;
    row["uniqueness"] = uniqueness_json(res.uniqueness, res.count);
    if (res.grouping_marginal) row["groupingMarginal"] = true;
    per_k.push_back(row);
  }
  j["perComponent"] = per_k;

  Json global_json = approximation_json(global, true);
  global_json["boundary"] = global.boundary;
  global_json["tiedComponents"] = global.tied_components;
  if (global.boundary) global_json["note"] = kHalfThresholdNote;
  j["global"] = global_json;

  j["oracle"] = opt.run_oracle
                    ? oracle_cross_check(f, report, s, tol)
                    : Json{{"status", "skipped"}, {"reason", "disabled"}};
  attach_timing(j, start);
  return j;
}

Json analyze_diagonal(const FrameDocument& doc, const std::string& input_path,
                      const AnalyzeOptions& opt, const Tolerances& tol) {
  const auto start = std::chrono::steady_clock::now();
  const DiagonalModel& model = doc.model;
  const ComponentReport report = component_report(model);

  Json j = report_header("analyze", input_path);
  j["component"] = component_report_json(report);
  j["exceptional"] = model.exceptional;

  if (!model.tail_converges) {
    j["perComponent"] = Json::array();
    j["global"] = nullptr;
    j["note"] =
        "the tail does not converge quadratically: no Parseval frame is "
        "quadratically close and there is nothing to approximate";
    j["oracle"] = {{"status", "skipped"}, {"reason", "tail does not converge"}};
    attach_timing(j, start);
    return j;
  }

  Json per_k = Json::array();
  std::int64_t lo = opt.k_lo;
  if (report.lower.is_finite()) lo = std::max(lo, report.lower.value());
  std::int64_t hi = opt.k_hi;
  if (report.upper.is_finite()) hi = std::min(hi, report.upper.value());
  for (std::int64_t k = lo; k <= hi; ++k) {
    MinimizerFamily family = minimize_k(model, static_cast<int>(k));
    Json row;
    row["k"] = k;
    row["squaredDistance"] = family.value;
    row["uniqueness"] = family_kind_json(family);
    per_k.push_back(row);
  }
  j["perComponent"] = per_k;
  j["global"] = diagonal_global_json(model, report, tol);

  Json oracle;
  try {
    const std::vector<double> a = flatten_model(model);
    bool all_pass = true;
    Json rows = Json::array();
    const auto [blo, bhi] = model_index_bounds(model);
    for (std::int64_t k = blo.value(); k <= bhi.value(); ++k) {
      const MinimizerFamily closed = minimize_k(model, static_cast<int>(k));
      const MinimizerFamily brute = brute_force_oracle(a, static_cast<int>(k));
      const bool pass = closed.value == brute.value;
      all_pass = all_pass && pass;
      rows.push_back({{"k", k},
                      {"oracleValue", brute.value},
                      {"closedForm", closed.value},
                      {"pass", pass}});
    }
    oracle["status"] = all_pass ? "pass" : "fail";
    oracle["perComponent"] = rows;
  } catch (const ResourceError& e) {
    oracle["status"] = "skipped";
    oracle["reason"] = e.what();
  }
  j["oracle"] = oracle;
  attach_timing(j, start);
  return j;
}

/// Deterministic then seeded enumeration of family members for a frame-kind
/// approximation result.
Json enumerate_family(const Frame& f, const ApproximationResult& res,
                      int enumerate_limit, std::uint64_t seed,
                      const Tolerances& tol) {
  Json reps = Json::array();
  if (enumerate_limit <= 0) return reps;
  const Matrix& fm = f.synthesis;

  auto push = [&](const Matrix& x) {
    const double d = hs_distance(fm, x);
    reps.push_back({{"data", matrix_to_json(x)}, {"squaredDistance", d * d}});
  };

  push(res.minimizer.synthesis);
  std::mt19937_64 rng(seed);

  if (res.kernel_family) {
    const auto& fam = *res.kernel_family;
    const Matrix u = res.minimizer.synthesis -
                     [&] {
                       Matrix shift = Matrix::Zero(fm.rows(), fm.cols());
                       for (int i = 0; i < fam.rank; ++i)
                         shift += fam.cokernel_basis.col(i) *
                                  fam.kernel_basis.col(i).adjoint();
                       return shift;
                     }();
    const Index pairs =
        std::min(fam.kernel_basis.cols(), fam.cokernel_basis.cols());
    // deterministic sign patterns on the first -k pairs, then random S
    for (std::uint64_t mask = 1;
         static_cast<int>(reps.size()) < enumerate_limit &&
         mask < (std::uint64_t{1} << fam.rank);
         ++mask) {
      Matrix shift = Matrix::Zero(fm.rows(), fm.cols());
      for (int i = 0; i < fam.rank; ++i) {
        const double sign = (mask >> i) & 1 ? -1.0 : 1.0;
        shift += sign * fam.cokernel_basis.col(i) * fam.kernel_basis.col(i).adjoint();
      }
      push(u + shift);
    }
    while (static_cast<int>(reps.size()) < enumerate_limit) {
      const Matrix qk = random_unitary(fam.kernel_basis.cols(), rng);
      const Matrix qc = random_unitary(fam.cokernel_basis.cols(), rng);
      Matrix shift = Matrix::Zero(fm.rows(), fm.cols());
      for (int i = 0; i < fam.rank && i < pairs; ++i)
        shift += (fam.cokernel_basis * qc.col(i)) *
                 (fam.kernel_basis * qk.col(i)).adjoint();
      push(u + shift);
    }
  } else if (res.eigen_family && res.uniqueness == Uniqueness::infinitely_many) {
    const auto& fam = *res.eigen_family;
    const SvdFactorization s = svd(fm, -1.0, tol);
    Matrix u_full = Matrix::Zero(fm.rows(), fm.cols());
    for (Index i = 0; i < s.rank; ++i)
      u_full += s.left.col(i) * s.right.col(i).adjoint();
    const Index b = fam.eigenspace_basis.cols();
    while (static_cast<int>(reps.size()) < enumerate_limit) {
      const Matrix q = random_unitary(b, rng);
      const Matrix span = fam.eigenspace_basis * q.leftCols(fam.e1_rank);
      const Matrix e1 = span * span.adjoint();
      push(u_full * (identity(fm.cols()) - fam.e0 - e1));
    }
  }
  return reps;
}

}  // namespace

Json build_analyze_report(const FrameDocument& doc, const std::string& input_path,
                          const AnalyzeOptions& opt, const Tolerances& tol) {
  return doc.is_frame() ? analyze_frame(doc, input_path, opt, tol)
                        : analyze_diagonal(doc, input_path, opt, tol);
}

Json build_approx_report(const FrameDocument& doc, const std::string& input_path,
                         std::optional<int> component, int enumerate_limit,
                         std::uint64_t seed, const Tolerances& tol) {
  const auto start = std::chrono::steady_clock::now();
  Json j = report_header("approx", input_path);
  j["seed"] = seed;
  j["mode"] = component ? "component" : "global";

  if (doc.is_frame()) {
    const Frame f = doc.frame();
    const ApproximationResult res = component
                                        ? approx_in_component(f, *component, tol)
                                        : global_approx(f, tol);
    Json body = approximation_json(res, true);
    if (!component) {
      body["boundary"] = res.boundary;
      body["tiedComponents"] = res.tied_components;
      if (res.boundary) body["note"] = kHalfThresholdNote;
    }
    if (enumerate_limit > 0)
      body["representatives"] =
          enumerate_family(f, res, enumerate_limit, seed, tol);
    j["result"] = body;
  } else {
    const DiagonalModel& model = doc.model;
    const ComponentReport report = component_report(model);
    if (!model.tail_converges)
      throw DomainError(
          "approx: the model tail does not converge, nothing is quadratically "
          "close");
    if (component) {
      if (!report.contains(*component))
        throw InfeasibleComponentError(
            *component, "index set is [" + report.lower.str() + ", " +
                            report.upper.str() + "]");
      MinimizerFamily family = minimize_k(model, *component);
      Json body;
      body["k"] = *component;
      body["squaredDistance"] = family.value;
      body["uniqueness"] = family_kind_json(family);
      Json reps = Json::array();
      const std::size_t limit =
          enumerate_limit > 0 ? static_cast<std::size_t>(enumerate_limit) : 1;
      for (std::size_t i = 0; i < family.representatives.size() && i < limit; ++i)
        reps.push_back(sign_sequence_json(model, family.representatives[i]));
      body["representatives"] = reps;
      j["result"] = body;
    } else {
      j["result"] = diagonal_global_json(model, report, tol);
    }
  }
  attach_timing(j, start);
  return j;
}

Json build_oracle_report(const FrameDocument& doc, const std::string& input_path,
                         std::optional<int> k, const Tolerances& /*tol*/) {
  const auto start = std::chrono::steady_clock::now();
  Json j = report_header("oracle", input_path);

  DiagonalModel model;
  if (doc.is_frame()) {
    const Matrix& m = doc.data;
    for (Index r = 0; r < m.rows(); ++r)
      for (Index c = 0; c < m.cols(); ++c) {
        if (r == c) continue;
        if (m(r, c) != Scalar(0.0, 0.0))
          throw SchemaError("oracle: input matrix is not diagonal");
      }
    std::vector<double> diag;
    for (Index i = 0; i < std::min(m.rows(), m.cols()); ++i) {
      const Scalar v = m(i, i);
      if (v.imag() != 0.0 || v.real() < 0.0)
        throw SchemaError("oracle: diagonal entries must be real and nonnegative");
      diag.push_back(v.real());
    }
    model = dense_model(std::move(diag));
  } else {
    model = doc.model;
    if (!model.tail_converges)
      throw SchemaError("oracle: the model tail does not converge");
  }

  const std::vector<double> a = flatten_model(model);  // ResourceError if too big
  const auto [lo, hi] = model_index_bounds(model);
  std::int64_t from = lo.value(), to = hi.value();
  if (k) {
    if (*k < from || *k > to)
      throw InfeasibleComponentError(*k, "index set is [" + lo.str() + ", " +
                                             hi.str() + "]");
    from = to = *k;
  }

  bool all_pass = true;
  Json rows = Json::array();
  std::vector<double> values;
  for (std::int64_t kk = from; kk <= to; ++kk) {
    const MinimizerFamily closed = minimize_k(model, static_cast<int>(kk));
    const MinimizerFamily brute = brute_force_oracle(a, static_cast<int>(kk));
    std::vector<std::vector<int>> closed_set;
    for (const auto& rep : closed.representatives)
      closed_set.push_back(flatten_sequence(model, rep));
    std::vector<std::vector<int>> brute_set;
    for (const auto& rep : brute.representatives) brute_set.push_back(rep.values);
    std::sort(closed_set.begin(), closed_set.end());
    std::sort(brute_set.begin(), brute_set.end());

    const bool pass = closed.value == brute.value && closed_set == brute_set &&
                      closed.count == brute.count;
    all_pass = all_pass && pass;
    values.push_back(brute.value);
    Json row;
    row["k"] = kk;
    row["pass"] = pass;
    row["value"] = brute.value;
    row["count"] = extended_nat_json(brute.count);
    if (brute.count >= ExtendedNat(2)) row["multipleMinimizers"] = true;
    rows.push_back(row);
  }
  // annotate cross-component ties of the minimal value
  const double best = *std::min_element(values.begin(), values.end());
  std::size_t tied = 0;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] == best) ++tied;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] == best && tied > 1) rows[i]["tie"] = true;
  j["status"] = all_pass ? "pass" : "fail";
  j["perComponent"] = rows;
  attach_timing(j, start);
  return j;
}

bool oracle_report_passed(const Json& report) {
  return report.contains("status") && report["status"] == "pass";
}

Json build_connect_report(const FrameDocument& x, const FrameDocument& y,
                          const FrameDocument& f, int samples,
                          const Tolerances& tol) {
  const auto start = std::chrono::steady_clock::now();
  if (!x.is_frame() || !y.is_frame() || !f.is_frame())
    throw SchemaError("connect: all three inputs must be frame documents");
  const ParsevalFrame px{x.data};
  const ParsevalFrame py{y.data};
  const Frame frame = f.frame();

  const ConnectionCertificate cert = connect(px, py, frame, samples, tol);

  Json j;
  j["schemaVersion"] = "1";
  j["command"] = "connect";
  j["reconstructionResidual"] = cert.reconstruction_residual;
  j["maxPathDefect"] = cert.max_path_defect;
  j["v"] = matrix_to_json(cert.v);
  j["w"] = matrix_to_json(cert.w);
  j["generatorA"] = matrix_to_json(cert.generator_a);
  j["generatorB"] = matrix_to_json(cert.generator_b);
  Json pts = Json::array();
  for (const auto& [t, point] : cert.samples)
    pts.push_back({{"t", t}, {"defect", partial_isometry_defect(point)}});
  j["pathSamples"] = pts;
  j["pass"] = cert.reconstruction_residual <= tol.recon &&
              cert.max_path_defect <= tol.unitary;
  attach_timing(j, start);
  return j;
}

bool connect_report_passed(const Json& report) {
  return report.contains("pass") && report["pass"].get<bool>();
}

}  // namespace parsefit
