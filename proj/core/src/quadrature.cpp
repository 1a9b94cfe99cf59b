// quadrature.cpp
#include "mwm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "mwm/errors.hpp"

namespace mwm::quad {
namespace {

// G7/K15 abscissae and weights on [-1, 1]; odd K indices are the G7 nodes.
constexpr double kXgk[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769, -0.741531185599394,
    -0.586087235467691, -0.405845151377397, -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
constexpr double kWgk[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
constexpr double kWg[7] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                           0.417959183673469, 0.381830050505119, 0.279705391489277,
                           0.129484966168870};

struct Panel {
  double a, b;
  double integral;
  double error;
};

Panel eval_panel(const std::function<double(double)>& f, double a, double b) {
  const double h = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double gk = 0.0, g = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double y = f(mid + h * kXgk[i]);
    gk += kWgk[i] * y;
    if (i % 2 == 1) g += kWg[i / 2] * y;
  }
  Panel p{a, b, gk * h, 0.0};
  p.error = std::abs((gk - g) * h);
  return p;
}

// GL nodes/weights on [-1, 1]
constexpr double kGl8X[8] = {-0.960289856497536, -0.796666477413627, -0.525532409916329,
                             -0.183434642495650, 0.183434642495650,  0.525532409916329,
                             0.796666477413627,  0.960289856497536};
constexpr double kGl8W[8] = {0.101228536290376, 0.222381034453374, 0.313706645877887,
                             0.362683783378362, 0.362683783378362, 0.313706645877887,
                             0.222381034453374, 0.101228536290376};
constexpr double kGl15X[15] = {
    -0.987992518020485, -0.937273392400706, -0.848206583410427, -0.724417731360170,
    -0.570972172608539, -0.394151347077563, -0.201194093997435, 0.0,
    0.201194093997435,  0.394151347077563,  0.570972172608539,  0.724417731360170,
    0.848206583410427,  0.937273392400706,  0.987992518020485};
constexpr double kGl15W[15] = {
    0.030753241996117, 0.070366047488108, 0.107159220467172, 0.139570677926154,
    0.166269205816994, 0.186161000015562, 0.198431485327112, 0.202578241925561,
    0.198431485327112, 0.186161000015562, 0.166269205816994, 0.139570677926154,
    0.107159220467172, 0.070366047488108, 0.030753241996117};

} // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_tol, int max_panels, double seed_width) {
  if (!(b > a)) return 0.0;

  auto worse = [](const Panel& x, const Panel& y) { return x.error < y.error; };
  std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> heap(worse);

  int n_seed = 1;
  if (seed_width > 0.0)
    n_seed = std::min(max_panels, std::max(1, static_cast<int>(std::ceil((b - a) / seed_width))));
  double total = 0.0, total_err = 0.0;
  for (int i = 0; i < n_seed; ++i) {
    const double pa = a + (b - a) * static_cast<double>(i) / n_seed;
    const double pb = a + (b - a) * static_cast<double>(i + 1) / n_seed;
    Panel p = eval_panel(f, pa, pb);
    total += p.integral;
    total_err += p.error;
    heap.push(p);
  }

  int n_panels = n_seed;
  while (total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (n_panels >= max_panels) {
      throw NumericError("integrate_adaptive: tolerance not reached within max_panels", total,
                         total_err);
    }
    Panel p = heap.top();
    heap.pop();
    const double mid = 0.5 * (p.a + p.b);
    Panel l = eval_panel(f, p.a, mid);
    Panel r = eval_panel(f, mid, p.b);
    total += l.integral + r.integral - p.integral;
    total_err += l.error + r.error - p.error;
    heap.push(l);
    heap.push(r);
    ++n_panels;
  }
  return total;
}

FixedRule composite_gauss(double a, double b, int panels, int order) {
  if (order != 8 && order != 15) throw std::invalid_argument("composite_gauss: order is 8 or 15");
  const double* xs = order == 8 ? kGl8X : kGl15X;
  const double* ws = order == 8 ? kGl8W : kGl15W;
  FixedRule rule;
  rule.nodes.reserve(static_cast<std::size_t>(panels) * order);
  rule.weights.reserve(static_cast<std::size_t>(panels) * order);
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    for (int i = 0; i < order; ++i) {
      rule.nodes.push_back(mid + 0.5 * width * xs[i]);
      rule.weights.push_back(0.5 * width * ws[i]);
    }
  }
  return rule;
}

} // namespace mwm::quad
