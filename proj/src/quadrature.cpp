#include "xydm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include "xydm/errors.hpp"

namespace xydm {

namespace {

// QUADPACK qk21 abscissae (descending, last is the centre) and weights.
constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600527700730, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// 10-point Gauss weights for the odd-indexed kXgk nodes.
constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a;
  double b;
  Eigen::VectorXd kronrod;
  double error;
};

struct LargerError {
  bool operator()(const Segment& l, const Segment& r) const {
    if (l.error != r.error) return l.error < r.error;
    return l.a > r.a;  // deterministic tie-break: leftmost first
  }
};

Segment gauss_kronrod(const VectorIntegrand& f, Eigen::Index dim, double a, double b,
                      Eigen::VectorXd& scratch) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  Eigen::VectorXd k = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);

  f(centre, scratch);
  k += kWgk[10] * scratch;
  for (int n = 0; n < 10; ++n) {
    const double dx = half * kXgk[n];
    f(centre - dx, scratch);
    k += kWgk[n] * scratch;
    if (n % 2 == 1) g += kWg[n / 2] * scratch;
    f(centre + dx, scratch);
    k += kWgk[n] * scratch;
    if (n % 2 == 1) g += kWg[n / 2] * scratch;
  }
  k *= half;
  g *= half;
  const double err = (k - g).cwiseAbs().maxCoeff();
  return Segment{a, b, std::move(k), err};
}

}  // namespace

QuadratureResult integrate(const VectorIntegrand& f, Eigen::Index dimension,
                           std::span<const double> breakpoints,
                           const QuadratureOptions& options) {
  if (breakpoints.size() < 2) throw DomainError("integrate needs at least two breakpoints");
  Eigen::VectorXd scratch(dimension);
  std::priority_queue<Segment, std::vector<Segment>, LargerError> queue;

  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i] < breakpoints[i + 1])) {
      if (breakpoints[i] == breakpoints[i + 1]) continue;
      throw DomainError("integration breakpoints must be increasing");
    }
    queue.push(gauss_kronrod(f, dimension, breakpoints[i], breakpoints[i + 1], scratch));
  }
  if (queue.empty()) {
    return QuadratureResult{Eigen::VectorXd::Zero(dimension), 0.0, 0};
  }

  double error_sum = 0.0;
  {
    auto copy = queue;
    while (!copy.empty()) {
      error_sum += copy.top().error;
      copy.pop();
    }
  }

  while (error_sum > options.abs_tolerance) {
    if (static_cast<int>(queue.size()) >= options.max_intervals) {
      std::ostringstream os;
      os << "adaptive quadrature did not converge: error " << error_sum << " after "
         << queue.size() << " intervals (target " << options.abs_tolerance << ")";
      throw NumericalError(os.str(), error_sum);
    }
    Segment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      std::ostringstream os;
      os << "adaptive quadrature hit floating-point resolution at x=" << worst.a
         << " with error " << error_sum;
      throw NumericalError(os.str(), error_sum);
    }
    Segment left = gauss_kronrod(f, dimension, worst.a, mid, scratch);
    Segment right = gauss_kronrod(f, dimension, mid, worst.b, scratch);
    error_sum += left.error + right.error - worst.error;
    queue.push(std::move(left));
    queue.push(std::move(right));
  }

  // Sum in left-to-right order so the result does not depend on heap layout.
  std::vector<Segment> segments;
  segments.reserve(queue.size());
  double exact_error = 0.0;
  while (!queue.empty()) {
    exact_error += queue.top().error;
    segments.push_back(queue.top());
    queue.pop();
  }
  std::sort(segments.begin(), segments.end(),
            [](const Segment& l, const Segment& r) { return l.a < r.a; });
  QuadratureResult out{Eigen::VectorXd::Zero(dimension), exact_error,
                       static_cast<int>(segments.size())};
  for (const Segment& s : segments) out.value += s.kronrod;
  return out;
}

double integrate_scalar(const std::function<double(double)>& f, double a, double b,
                        const QuadratureOptions& options) {
  const double pts[2] = {a, b};
  auto vf = [&f](double x, Eigen::Ref<Eigen::VectorXd> out) { out[0] = f(x); };
  return integrate(vf, 1, pts, options).value[0];
}

}  // namespace xydm
