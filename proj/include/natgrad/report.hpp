#pragma once

#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "natgrad/core.hpp"
#include "natgrad/descent.hpp"
#include "natgrad/invariance.hpp"
#include "natgrad/models.hpp"
#include "natgrad/natural_gradient.hpp"
#include "natgrad/suites.hpp"

namespace natgrad::report {

/// Round-trip-exact float formatting shared by the CSV and JSON writers.
inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out.push_back('\\');
      out.push_back(c);
    } else if (static_cast<unsigned char>(c) < 0x20) {
      char buf[8];
      std::snprintf(buf, sizeof(buf), "\\u%04x", c);
      out += buf;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

/// One reported quantity: a scalar, vector or matrix with a label drawn from
/// a fixed tag vocabulary naming the identity it instantiates.
struct ReportRow {
  std::string tag;
  std::string name;
  Matrix value;  // scalars are 1x1, vectors single-column
};

inline const std::set<std::string>& tag_vocabulary() {
  static const std::set<std::string> vocab = {
      "coordinate-tangent",     "gram-matrix",          "gram-matrix-reparam",
      "transfer-matrix",        "coordinate-gradient",  "coordinate-gradient-reparam",
      "min-norm-coefficients",  "weighted-coefficients","on-model-gradient",
      "on-model-gradient-reparam", "pushforward-gap-gnorm", "parameter-gap",
      "model-invariance-gap",   "jacobian",             "jacobian-reparam-at-zero",
      "ambient-gradient",       "projected-gradient",   "span-projector-gap",
      "nonproper-fraction",     "objective-value",
  };
  return vocab;
}

inline void validate_tags(const std::vector<ReportRow>& rows) {
  for (const auto& r : rows) {
    if (!tag_vocabulary().contains(r.tag)) {
      throw std::invalid_argument("report tag outside fixed vocabulary: " + r.tag);
    }
  }
}

inline Matrix as_matrix(double x) {
  Matrix m(1, 1);
  m(0, 0) = x;
  return m;
}

inline Matrix m_col(const Vector& v) {
  Matrix m(v.size(), 1);
  m.col(0) = v;
  return m;
}

inline std::string rows_to_csv(const std::vector<ReportRow>& rows) {
  validate_tags(rows);
  std::ostringstream out;
  out << "tag,name,row,col,value\n";
  for (const auto& r : rows) {
    for (Eigen::Index i = 0; i < r.value.rows(); ++i) {
      for (Eigen::Index j = 0; j < r.value.cols(); ++j) {
        out << r.tag << ',' << r.name << ',' << i << ',' << j << ','
            << fmt(r.value(i, j)) << '\n';
      }
    }
  }
  return out.str();
}

inline std::string rows_to_json(const std::vector<ReportRow>& rows) {
  validate_tags(rows);
  std::ostringstream out;
  out << "{\"rows\":[";
  bool first = true;
  for (const auto& r : rows) {
    if (!first) out << ',';
    first = false;
    out << "{\"tag\":\"" << json_escape(r.tag) << "\",\"name\":\""
        << json_escape(r.name) << "\",\"value\":[";
    for (Eigen::Index i = 0; i < r.value.rows(); ++i) {
      if (i) out << ',';
      out << '[';
      for (Eigen::Index j = 0; j < r.value.cols(); ++j) {
        if (j) out << ',';
        out << fmt(r.value(i, j));
      }
      out << ']';
    }
    out << "]}";
  }
  out << "]}\n";
  return out.str();
}

inline std::string trajectory_csv_header(int d, int n) {
  std::ostringstream out;
  out << "step";
  for (int i = 0; i < d; ++i) out << ",xi" << i + 1;
  for (int i = 0; i < n; ++i) out << ",x" << i + 1;
  out << ",L";
  for (int i = 0; i < d; ++i) out << ",coeff" << i + 1;
  out << ",gnorm,thm1_residual\n";
  return out.str();
}

inline std::string trajectory_to_csv(const Trajectory& traj) {
  std::ostringstream out;
  if (traj.records.empty()) return out.str();
  const int d = static_cast<int>(traj.records.front().xi.size());
  const int n = static_cast<int>(traj.records.front().model_point.size());
  out << trajectory_csv_header(d, n);
  for (const auto& rec : traj.records) {
    out << rec.step;
    for (int i = 0; i < d; ++i) out << ',' << fmt(rec.xi(i));
    for (int i = 0; i < n; ++i) out << ',' << fmt(rec.model_point(i));
    out << ',' << fmt(rec.objective);
    for (int i = 0; i < d; ++i)
      out << ',' << fmt(rec.coefficients.size() ? rec.coefficients(i) : 0.0);
    out << ',' << fmt(rec.gnorm) << ',' << fmt(rec.thm1_residual) << '\n';
  }
  if (traj.domain_exit || traj.diverged) {
    out << "# diagnostic: " << traj.diagnostic << '\n';
  }
  return out.str();
}

inline std::string trajectory_to_json(const Trajectory& traj, const std::string& label) {
  std::ostringstream out;
  out << "{\"label\":\"" << json_escape(label) << "\",\"domain_exit\":"
      << (traj.domain_exit ? "true" : "false") << ",\"diagnostic\":\""
      << json_escape(traj.diagnostic) << "\",\"records\":[";
  bool first = true;
  for (const auto& rec : traj.records) {
    if (!first) out << ',';
    first = false;
    auto vec = [&](const Vector& v) {
      std::string s = "[";
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += fmt(v(i));
      }
      return s + "]";
    };
    out << "{\"step\":" << rec.step << ",\"xi\":" << vec(rec.xi)
        << ",\"model_point\":" << vec(rec.model_point)
        << ",\"objective\":" << fmt(rec.objective)
        << ",\"coefficients\":" << vec(rec.coefficients)
        << ",\"gnorm\":" << fmt(rec.gnorm)
        << ",\"thm1_residual\":" << fmt(rec.thm1_residual) << '}';
  }
  out << "]}\n";
  return out.str();
}

inline std::string suites_to_json(const std::vector<suites::SuiteResult>& results,
                                  std::uint64_t seed) {
  std::ostringstream out;
  out << "{\"seed\":" << seed << ",\"suites\":[";
  bool first = true;
  for (const auto& r : results) {
    if (!first) out << ',';
    first = false;
    out << "{\"name\":\"" << json_escape(r.name) << "\",\"instances\":" << r.instances
        << ",\"max_residual\":" << fmt(r.max_residual)
        << ",\"threshold\":" << fmt(r.threshold)
        << ",\"passed\":" << (r.passed ? "true" : "false") << ",\"note\":\""
        << json_escape(r.note) << "\"}";
  }
  out << "]}\n";
  return out.str();
}

inline std::string suites_to_csv(const std::vector<suites::SuiteResult>& results) {
  std::ostringstream out;
  out << "suite,instances,max_residual,threshold,passed,note\n";
  for (const auto& r : results) {
    std::string note = r.note;
    for (char& c : note)
      if (c == ',') c = ';';
    out << r.name << ',' << r.instances << ',' << fmt(r.max_residual) << ','
        << fmt(r.threshold) << ',' << (r.passed ? "true" : "false") << ',' << note
        << '\n';
  }
  return out.str();
}

/// Builds the full printable report for one registered example: every
/// intermediate quantity of the corresponding worked calculation.
inline std::vector<ReportRow> example_report(const std::string& id) {
  std::vector<ReportRow> rows;
  if (id == "a3-overparam") {
    const auto m = models::a3_overparam();
    const Vector xi = m.xi0;
    const Diffeomorphism& f = *m.f;
    const Vector theta = f.inverse(xi);
    const Parametrization psi = compose(m.phi, f);
    rows.push_back({"jacobian", "J_phi(xi)", m.phi.jacobian(xi)});
    rows.push_back({"transfer-matrix", "F(theta)", f.transfer(theta)});
    rows.push_back({"gram-matrix", "G(xi)", gram_matrix(m.space, m.phi, xi).entries});
    rows.push_back({"gram-matrix-reparam", "G(theta)",
                    gram_matrix(m.space, psi, theta).entries});
    rows.push_back({"coordinate-gradient", "grad_xi",
                    m_col(parameter_differential(m.phi, m.obj, xi))});
    rows.push_back({"coordinate-gradient-reparam", "grad_theta",
                    m_col(parameter_differential(psi, m.obj, theta))});
    const ParameterSpaceGap gap = parameter_space_gap(m.space, m.phi, f, xi, m.obj);
    rows.push_back({"min-norm-coefficients", "y_Xi", m_col(gap.y_xi)});
    rows.push_back({"weighted-coefficients", "y_Theta", m_col(gap.y_theta)});
    rows.push_back({"pushforward-gap-gnorm", "g-norm of pushforward gap",
                    as_matrix(gap.pushforward_gap_gnorm)});
    rows.push_back({"parameter-gap", "Euclidean norm of y_Theta - y_Xi",
                    as_matrix((gap.y_theta - gap.y_xi).norm())});
    rows.push_back({"on-model-gradient", "pushforward under phi",
                    m_col(natural_parameter_gradient_on_model(m.space, m.phi, m.obj, xi)
                              .components)});
    rows.push_back({"on-model-gradient-reparam", "pushforward under psi",
                    m_col(natural_parameter_gradient_on_model(m.space, psi, m.obj, theta)
                              .components)});
  } else if (id == "a2-figure-eight") {
    const auto m = models::a2_figure_eight();
    const Vector xi = Vector::Zero(1);
    const Diffeomorphism& f = *m.f;
    const Parametrization psi = compose(m.phi, f);
    const Vector theta = Vector::Zero(1);  // psi(0) = phi(0) = origin
    rows.push_back({"coordinate-tangent", "tangent of phi at 0", m.phi.jacobian(xi)});
    rows.push_back({"coordinate-tangent", "tangent of psi at 0", psi.jacobian(theta)});
    rows.push_back({"gram-matrix", "G(0)", gram_matrix(m.space, m.phi, xi).entries});
    rows.push_back({"gram-matrix-reparam", "G_psi(0)",
                    gram_matrix(m.space, psi, theta).entries});
    const TangentVector a =
        natural_parameter_gradient_on_model(m.space, m.phi, m.obj, xi);
    const TangentVector b =
        natural_parameter_gradient_on_model(m.space, psi, m.obj, theta);
    rows.push_back({"on-model-gradient", "pushforward under phi", m_col(a.components)});
    rows.push_back({"on-model-gradient-reparam", "pushforward under psi",
                    m_col(b.components)});
    rows.push_back({"model-invariance-gap", "g-norm of on-model gap",
                    as_matrix(model_invariance_gap(m.space, m.phi, xi, psi, theta, m.obj))});
  } else if (id == "a1-cubic") {
    const auto m = models::a1_cubic();
    const DegenerateReparametrizationReport rep =
        degenerate_reparametrization_experiment(m.space, m.phi, m.xi0, m.obj);
    rows.push_back({"jacobian-reparam-at-zero", "J_psi(0)", rep.psi_jacobian_at_zero});
    rows.push_back({"on-model-gradient-reparam", "pushforward under psi at 0",
                    m_col(rep.psi_side_pushforward)});
    rows.push_back({"on-model-gradient", "pushforward under phi at xi*",
                    m_col(rep.phi_side_pushforward)});
  } else if (id == "ex1-orthogonal-spans") {
    const auto m = models::ex1_orthogonal_spans();
    const Parametrization psi = models::cubic_fold_x(m.space);
    const Vector origin = Vector::Zero(2);
    rows.push_back({"jacobian", "J_phi(0)", m.phi.jacobian(origin)});
    rows.push_back({"jacobian", "J_psi(0)", psi.jacobian(origin)});
    const TangentVector a =
        natural_parameter_gradient_on_model(m.space, m.phi, m.obj, origin);
    const TangentVector b =
        natural_parameter_gradient_on_model(m.space, psi, m.obj, origin);
    rows.push_back({"on-model-gradient", "pushforward under phi", m_col(a.components)});
    rows.push_back({"on-model-gradient-reparam", "pushforward under psi",
                    m_col(b.components)});
    rows.push_back({"model-invariance-gap", "g-norm of on-model gap",
                    as_matrix(model_invariance_gap(m.space, m.phi, origin, psi, origin,
                                                   m.obj))});
  } else {
    throw UnknownExample("unknown example id: " + id);
  }
  validate_tags(rows);
  return rows;
}

}  // namespace natgrad::report
