#include "distil/assemblage.hpp"

#include "distil/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace distil {

namespace {

constexpr double kSignallingTol = 1e-9;
constexpr double kTraceTol = 1e-9;
constexpr double kReducedStateTol = 1e-7;

void add(ValidationReport& report, Violation::Kind kind, std::size_t x, std::size_t a,
         double magnitude, std::string message) {
  report.push_back(Violation{kind, x, a, magnitude, std::move(message)});
}

// Hermiticity and positivity of every element.
void check_elements(const AssemblageShape& s, ValidationReport& report) {
  for (std::size_t x = 0; x < s.n_inputs(); ++x) {
    for (std::size_t a = 0; a < s.n_outputs(); ++a) {
      const Matrix& m = s(x, a);
      const double defect = hermiticity_defect(m);
      if (defect > tol::kHermitian) {
        add(report, Violation::Kind::NonHermitian, x, a, defect, "element is not Hermitian");
        continue;
      }
      const double lmin = min_eigenvalue(m);
      if (lmin < -tol::kPsdFloor)
        add(report, Violation::Kind::NotPositive, x, a, -lmin, "element has a negative eigenvalue");
    }
  }
}

Matrix marginal(const AssemblageShape& s, std::size_t x) {
  Matrix sum = Matrix::Zero(s.dim(), s.dim());
  for (std::size_t a = 0; a < s.n_outputs(); ++a) sum += s(x, a);
  return sum;
}

}  // namespace

AssemblageShape::AssemblageShape(Elements elements) : elements_(std::move(elements)) {
  if (elements_.empty() || elements_.front().empty())
    throw DimensionMismatch("assemblage needs at least one input and one outcome");
  dim_ = elements_.front().front().rows();
  if (dim_ == 0) throw DimensionMismatch("assemblage elements must be non-empty operators");
  const std::size_t n_out = elements_.front().size();
  for (std::size_t x = 0; x < elements_.size(); ++x) {
    if (elements_[x].size() != n_out) {
      std::ostringstream os;
      os << "input " << x << " has " << elements_[x].size() << " outcomes, expected " << n_out;
      throw DimensionMismatch(os.str());
    }
    for (std::size_t a = 0; a < n_out; ++a) {
      const Matrix& m = elements_[x][a];
      if (m.rows() != dim_ || m.cols() != dim_) {
        std::ostringstream os;
        os << "element [" << x << "][" << a << "] is " << m.rows() << "x" << m.cols()
           << ", expected " << dim_ << "x" << dim_;
        throw DimensionMismatch(os.str());
      }
    }
  }
}

MeasurementAssemblage::MeasurementAssemblage(Elements elements)
    : AssemblageShape(std::move(elements)) {
  carrier_ = identity(dim());
}

MeasurementAssemblage::MeasurementAssemblage(Elements elements, Matrix carrier_projector)
    : AssemblageShape(std::move(elements)), carrier_(std::move(carrier_projector)) {
  if (carrier_.rows() != dim() || carrier_.cols() != dim())
    throw DimensionMismatch("carrier projector does not match the element dimension");
}

Eigen::Index MeasurementAssemblage::carrier_rank() const { return support_rank(carrier_); }

BipartiteState::BipartiteState(Matrix rho, Eigen::Index dim_a, Eigen::Index dim_b)
    : rho_(std::move(rho)), dim_a_(dim_a), dim_b_(dim_b) {
  if (dim_a <= 0 || dim_b <= 0 || rho_.rows() != dim_a * dim_b || rho_.cols() != dim_a * dim_b)
    throw DimensionMismatch("bipartite density must be (dim_a*dim_b)-square");
  require_hermitian(rho_, "bipartite state");
  const double lmin = min_eigenvalue(rho_);
  if (lmin < -tol::kPsdFloor) {
    std::ostringstream os;
    os << "bipartite state has eigenvalue " << lmin;
    throw NegativeOperator(os.str());
  }
  const double tr = real_trace(rho_);
  if (std::abs(tr - 1.0) > kTraceTol) {
    std::ostringstream os;
    os << "bipartite state has trace " << tr;
    throw NonUnitTrace(os.str());
  }
}

std::string describe(const ValidationReport& report) {
  std::ostringstream os;
  for (const auto& v : report)
    os << "[" << v.x << "][" << v.a << "] " << v.message << " (deviation " << v.magnitude << ")\n";
  return os.str();
}

ValidationReport validate_state_assemblage(const StateAssemblage& sigma) {
  ValidationReport report;
  check_elements(sigma, report);
  const Matrix reference = marginal(sigma, 0);
  for (std::size_t x = 1; x < sigma.n_inputs(); ++x) {
    const double dev = max_abs(marginal(sigma, x) - reference);
    if (dev > kSignallingTol)
      add(report, Violation::Kind::Signalling, x, 0, dev, "marginal differs from input 0");
  }
  const double tr = real_trace(reference);
  if (std::abs(tr - 1.0) > kTraceTol)
    add(report, Violation::Kind::TraceMismatch, 0, 0, std::abs(tr - 1.0),
        "reduced state does not have unit trace");
  return report;
}

ValidationReport validate_measurement_assemblage(const MeasurementAssemblage& e) {
  ValidationReport report;
  check_elements(e, report);
  const Matrix& carrier = e.carrier();
  const double idem = max_abs(carrier * carrier - carrier) + hermiticity_defect(carrier);
  if (idem > tol::kPsdFloor)
    add(report, Violation::Kind::Carrier, 0, 0, idem, "carrier is not an orthogonal projector");
  for (std::size_t x = 0; x < e.n_inputs(); ++x) {
    const double dev = max_abs(marginal(e, x) - carrier);
    if (dev > kSignallingTol)
      add(report, Violation::Kind::Completeness, x, 0, dev,
          "effects do not sum to the carrier projector");
  }
  return report;
}

Matrix reduced_state(const StateAssemblage& sigma) {
  Matrix sum = Matrix::Zero(sigma.dim(), sigma.dim());
  const Matrix reference = marginal(sigma, 0);
  double worst = 0.0;
  for (std::size_t x = 0; x < sigma.n_inputs(); ++x) {
    const Matrix m = marginal(sigma, x);
    worst = std::max(worst, max_abs(m - reference));
    sum += m;
  }
  if (worst > kReducedStateTol) {
    std::ostringstream os;
    os << "marginals depend on the input by " << worst;
    throw NoSignallingViolation(os.str());
  }
  return hermitian_part(sum / static_cast<double>(sigma.n_inputs()));
}

StateAssemblage steer_from_state(const BipartiteState& rho_ab, const MeasurementAssemblage& e) {
  if (e.dim() != rho_ab.dim_a())
    throw DimensionMismatch("measurement dimension differs from the steering party's dimension");
  const Matrix id_b = identity(rho_ab.dim_b());
  Elements out(e.n_inputs(), std::vector<Matrix>(e.n_outputs()));
  for (std::size_t x = 0; x < e.n_inputs(); ++x)
    for (std::size_t a = 0; a < e.n_outputs(); ++a)
      out[x][a] = hermitian_part(
          partial_trace_first(kron(e(x, a), id_b) * rho_ab.rho(), rho_ab.dim_a(), rho_ab.dim_b()));
  return StateAssemblage(std::move(out));
}

MeasurementAssemblage compute_seo(const StateAssemblage& sigma) {
  const Matrix rho = reduced_state(sigma);
  const Matrix root_inv = sqrt_pinv(rho);
  Elements out(sigma.n_inputs(), std::vector<Matrix>(sigma.n_outputs()));
  for (std::size_t x = 0; x < sigma.n_inputs(); ++x)
    for (std::size_t a = 0; a < sigma.n_outputs(); ++a)
      out[x][a] = hermitian_part(root_inv * sigma(x, a) * root_inv);
  return MeasurementAssemblage(std::move(out), support_projector(rho));
}

StateAssemblage assemblage_from_seo(const MeasurementAssemblage& e, const Matrix& rho,
                                    const Matrix& u) {
  if (rho.rows() != u.rows() || u.cols() != e.dim() || u.rows() != u.cols())
    throw DimensionMismatch("assemblage_from_seo: density, unitary and effects disagree in size");
  const Matrix rotated_carrier = hermitian_part(u * e.carrier() * u.adjoint());
  const double excess = support_excess(support_projector(rho), rotated_carrier);
  if (excess > tol::kSupportInclusion) {
    std::ostringstream os;
    os << "supp(rho) leaves the rotated carrier by " << excess;
    throw SupportViolation(os.str());
  }
  return StateAssemblage(conjugate_elements(conjugate_elements(e.elements(), u), matrix_sqrt(rho)));
}

Elements conjugate_elements(const Elements& elements, const Matrix& o) {
  Elements out(elements.size());
  for (std::size_t x = 0; x < elements.size(); ++x) {
    out[x].reserve(elements[x].size());
    for (const Matrix& m : elements[x]) out[x].push_back(hermitian_part(o * m * o.adjoint()));
  }
  return out;
}

Elements scale_elements(const Elements& elements, double factor) {
  Elements out = elements;
  for (auto& row : out)
    for (auto& m : row) m *= factor;
  return out;
}

double max_entry_difference(const Elements& lhs, const Elements& rhs) {
  if (lhs.size() != rhs.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t x = 0; x < lhs.size(); ++x) {
    if (lhs[x].size() != rhs[x].size()) return std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < lhs[x].size(); ++a) {
      if (lhs[x][a].rows() != rhs[x][a].rows() || lhs[x][a].cols() != rhs[x][a].cols())
        return std::numeric_limits<double>::infinity();
      worst = std::max(worst, max_abs(lhs[x][a] - rhs[x][a]));
    }
  }
  return worst;
}

double summed_frobenius_difference(const Elements& lhs, const Elements& rhs) {
  if (lhs.size() != rhs.size()) return std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (std::size_t x = 0; x < lhs.size(); ++x) {
    if (lhs[x].size() != rhs[x].size()) return std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < lhs[x].size(); ++a) total += (lhs[x][a] - rhs[x][a]).norm();
  }
  return total;
}

}  // namespace distil
