#include "drsubmax/oracle.hpp"

#include <cmath>
#include <sstream>

#include "drsubmax/errors.hpp"

namespace drsubmax {

void OracleHandle::guard(const Eigen::VectorXd& z) const {
  if (!contains(*body_, z, guard_tol_)) {
    std::ostringstream msg;
    msg << "oracle query outside the feasible set (violation "
        << violation(*body_, z) << ")";
    throw InfeasibleQueryError(msg.str());
  }
}

double OracleHandle::value(const Eigen::VectorXd& z) {
  if (kind_ != OracleKind::value_det && kind_ != OracleKind::value_stoch)
    throw std::logic_error("value query on a gradient oracle");
  guard(z);
  ++query_count_;
  double v = objective_->value(z);
  if (kind_ == OracleKind::value_stoch && sigma_ > 0.0)
    v += sigma_ * rng_.normal();
  return v;
}

void OracleHandle::gradient_into(const Eigen::VectorXd& z, Eigen::VectorXd& out) {
  if (kind_ != OracleKind::grad_det && kind_ != OracleKind::grad_stoch)
    throw std::logic_error("gradient query on a value oracle");
  guard(z);
  ++query_count_;
  objective_->gradient_into(z, out);
  if (kind_ == OracleKind::grad_stoch && sigma_ > 0.0) {
    const double scale = sigma_ / std::sqrt(static_cast<double>(out.size()));
    for (int i = 0; i < out.size(); ++i) out(i) += scale * rng_.normal();
  }
}

Eigen::VectorXd OracleHandle::gradient(const Eigen::VectorXd& z) {
  Eigen::VectorXd g(objective_->dim);
  gradient_into(z, g);
  return g;
}

}  // namespace drsubmax
