#include "ninf/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

namespace ninf {

namespace {

constexpr double kSingularityNoise = 1e-12;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + fmt(xs[i]);
  return s;
}

std::string describe(const ConvexDomain& d) {
  std::ostringstream s;
  std::visit(
      [&](const auto& shape) {
        using T = std::decay_t<decltype(shape)>;
        if constexpr (std::is_same_v<T, Interval>) {
          s << "interval " << fmt(shape.lo) << ' ' << fmt(shape.hi);
        } else if constexpr (std::is_same_v<T, Ball>) {
          s << "ball center " << fmt(shape.center.x()) << ' ' << fmt(shape.center.y()) << " radius " << fmt(shape.radius);
        } else if constexpr (std::is_same_v<T, Ellipse>) {
          s << "ellipse center " << fmt(shape.center.x()) << ' ' << fmt(shape.center.y()) << " semi_axes "
            << fmt(shape.semi_axes.x()) << ' ' << fmt(shape.semi_axes.y());
        } else {
          s << "polygon";
          for (const auto& v : shape.vertices) s << ' ' << fmt(v.x()) << ',' << fmt(v.y());
        }
      },
      d.shape());
  if (d.margin() > 0.0) s << " offset " << fmt(d.margin());
  return s.str();
}

ScalarField scaled_field(const ScalarField& u, double factor) {
  ScalarField out = u;
  for (double& v : out.values()) v *= factor;
  return out;
}

int nearest_inside(const Grid& g, const Point& x) {
  int best = -1;
  double dist = std::numeric_limits<double>::infinity();
  for (int n : g.inside_nodes()) {
    const double r = (g.position(n) - x).norm();
    if (r < dist) {
      dist = r;
      best = n;
    }
  }
  return best;
}

std::vector<int> cone_bases(const Grid& g) {
  const ConvexDomain& d = g.domain();
  const Point c = d.centroid();
  const double a = -d.signed_distance(c);
  std::vector<Point> targets{c};
  if (d.dimension() == 1) {
    for (double s : {-0.5, -0.25, 0.25, 0.5}) targets.emplace_back(c + Point(s * a, 0.0));
  } else {
    for (int k = 0; k < 4; ++k) {
      const double t = 0.5 * M_PI * k;
      targets.emplace_back(c + 0.5 * a * Point(std::cos(t), std::sin(t)));
    }
  }
  std::vector<int> nodes;
  for (const auto& t : targets) {
    const int n = nearest_inside(g, t);
    if (n >= 0 && std::find(nodes.begin(), nodes.end(), n) == nodes.end()) nodes.push_back(n);
  }
  return nodes;
}

class Runner {
 public:
  Runner(const ReportInput& in, RegularityReport& r) : in_(in), r_(r), u_(in.fields.back()), tol_(geometric_tolerance(u_)) {}

  void run(Check check) {
    switch (check) {
      case Check::concavity: return concavity();
      case Check::envelope: return envelope();
      case Check::cones: return cones();
      case Check::quadcone: return quadcone();
      case Check::semiconcavity: return semiconcavity();
      case Check::gradient: return gradient();
      case Check::blowup: return blowup();
      case Check::decay: return decay();
      case Check::comparison: return comparison();
      case Check::singularity: return singularity();
    }
  }

 private:
  void verdict(Check c, double value, double tol, bool pass, std::string note = {}) {
    r_.verdicts.push_back({c, value, tol, pass, std::move(note)});
  }

  void concavity() {
    for (const auto& u : in_.fields) r_.concavity_defect.push_back(concavity_defect(u, 0.5));
    const auto& seq = r_.concavity_defect;
    bool monotone = true;
    for (std::size_t i = 1; i < seq.size(); ++i) monotone = monotone && seq[i] <= 1.2 * seq[i - 1];
    verdict(Check::concavity, seq.back(), tol_, seq.back() <= tol_ && monotone,
            monotone ? "" : "defect grows under refinement");
  }

  void envelope() {
    const auto tf = transform(u_);
    const auto env = convex_envelope(tf.w, 2.0 * tol_);
    double gap = 0.0;
    for (int n : u_.grid().inside_nodes()) gap = std::max(gap, tf.w[n] - env.values[n]);
    const auto interiority = witness_interiority(env.witness, u_.grid());
    r_.envelope_defect = gap;
    r_.envelope_touching = interiority.touching_nodes.size();
    verdict(Check::envelope, gap, 2.0 * tol_, gap <= 2.0 * tol_ && interiority.all_interior(),
            interiority.all_interior() ? "" : std::to_string(interiority.touching_nodes.size()) + " nodes with boundary witnesses");
  }

  void cones() {
    const Grid& g = u_.grid();
    double mono = 0.0;
    double endpoint = 0.0;
    for (int base : cone_bases(g)) {
      const double R = g.boundary_dist(base);
      std::vector<double> radii;
      for (int j = 1; j <= 7; ++j) radii.push_back(R * j / 8.0);
      const auto cc = cone_comparison(u_, base, radii);
      mono = std::max(mono, cc.monotonicity_violation);
      endpoint = std::max(endpoint, cc.endpoint_violation);
    }
    r_.cone_monotonicity_violation = mono;
    r_.cone_endpoint_violation = endpoint;
    verdict(Check::cones, mono, tol_, mono <= tol_);
  }

  void quadcone() {
    if (!(in_.f > 0.0)) throw std::invalid_argument("quadcone check needs a positive constant source");
    for (const auto& u : in_.fields) r_.quad_cone_violation.push_back(quad_cone_bound(scaled_field(u, 1.0 / in_.f)));
    const double tol = tol_ / in_.f;
    verdict(Check::quadcone, r_.quad_cone_violation.back(), tol, r_.quad_cone_violation.back() <= tol);
  }

  void semiconcavity() {
    const auto s = semiconcavity_check(u_, in_.shrink);
    const Point c = in_.domain.centroid();
    r_.semiconcavity = SemiconcavityEntry{"domain scaled by " + fmt(in_.shrink) + " about (" + fmt(c.x()) + ", " + fmt(c.y()) +
                                              "), " + std::to_string(s.nodes_in_K) + " nodes",
                                          s.M, s.C, s.violation};
    verdict(Check::semiconcavity, s.violation, tol_, s.violation <= tol_);
  }

  void gradient() {
    r_.gradient_osc = gradient_oscillation(in_.fields, in_.shrink);
    const auto& seq = r_.gradient_osc;
    if (seq.size() == 1) {
      const double bound = std::sqrt(u_.grid().h());
      verdict(Check::gradient, seq[0], bound, seq[0] <= bound, "single field: spread against sqrt(h)");
      return;
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < seq.size(); ++i) decreasing = decreasing && seq[i] < seq[i - 1];
    verdict(Check::gradient, seq.back(), seq.front(), decreasing, decreasing ? "" : "spread stalls under refinement");
  }

  void blowup() {
    const ConvexDomain& d = u_.grid().domain();
    const Point c = d.centroid();
    const Eigen::Vector2d e1(1.0, 0.0);
    const auto t = d.ray_exit(c, e1, 2.0 * d.diameter());
    if (!t) throw std::runtime_error("no boundary point along +x from the centroid");
    const auto fit = boundary_blowup(transform(u_), c + *t * e1, -e1);
    r_.boundary_blowup = fit.exponent;
    verdict(Check::blowup, fit.exponent, 0.1, std::abs(fit.exponent - 0.5) <= 0.1, "exponent against 0.5");
  }

  void decay() {
    r_.decay = boundary_decay(in_.domain, {0.2, 0.1, 0.05}, in_.params);
    double excess = -std::numeric_limits<double>::infinity();
    for (const auto& p : r_.decay) excess = std::max(excess, p.sup - p.bound);
    verdict(Check::decay, excess, 0.0, excess <= 0.0, "largest sup - bound");
  }

  void comparison() {
    const auto lo = solve(in_.domain, SourceTerm::constant(in_.f), in_.params);
    const auto hi = solve(in_.domain, SourceTerm::constant(2.0 * in_.f), in_.params);
    long bad = 0;
    for (int n : lo.grid().inside_nodes()) bad += (in_.f >= 0.0 ? hi[n] < lo[n] : hi[n] > lo[n]) ? 1 : 0;
    r_.comparison_violations = bad;
    verdict(Check::comparison, static_cast<double>(bad), 0.0, bad == 0, "nodes out of order for f and 2f");
  }

  void singularity() {
    const auto square = ConvexDomain::polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
    const auto grid = build_grid(square, 1.0 / 128);
    const auto kink = ScalarField::sample(grid, [](const Point& x) { return -std::abs(x.x()); });
    const auto smooth = ScalarField::sample(grid, [](const Point& x) { return -0.5 * x.squaredNorm(); });
    const Eigen::Vector2d e1(1.0, 0.0);
    const double v1 = singularity_estimate_check(kink, {Point(0, 0), Eigen::Vector2d(0, 0), e1, 1.0, 0.0, 0.5});
    const double v2 = singularity_estimate_check(kink, {Point(0, 0), Eigen::Vector2d(0.5, 0), e1, 0.5, 0.0, 0.5});
    const double control = singularity_estimate_check(smooth, {Point(0, 0), Eigen::Vector2d(0, 0), e1, 0.01, 0.0, 0.5});
    r_.singularity_violation = std::max(v1, v2);
    r_.singularity_control = control;
    verdict(Check::singularity, std::max(v1, v2), kSingularityNoise, std::max(v1, v2) <= kSingularityNoise && control > 0.0,
            "synthetic -|x1| witnesses; smooth control must violate");
  }

  const ReportInput& in_;
  RegularityReport& r_;
  const ScalarField& u_;
  double tol_;
};

}  // namespace

const std::vector<Check>& all_checks() {
  static const std::vector<Check> checks{Check::concavity, Check::envelope,  Check::cones,
                                         Check::quadcone,  Check::semiconcavity, Check::gradient,
                                         Check::blowup,    Check::decay,     Check::comparison,
                                         Check::singularity};
  return checks;
}

std::string_view check_name(Check check) {
  switch (check) {
    case Check::concavity: return "concavity";
    case Check::envelope: return "envelope";
    case Check::cones: return "cones";
    case Check::quadcone: return "quadcone";
    case Check::semiconcavity: return "semiconcavity";
    case Check::gradient: return "gradient";
    case Check::blowup: return "blowup";
    case Check::decay: return "decay";
    case Check::comparison: return "comparison";
    case Check::singularity: return "singularity";
  }
  return "?";
}

std::optional<Check> parse_check(std::string_view name) {
  for (Check c : all_checks()) {
    if (check_name(c) == name) return c;
  }
  return std::nullopt;
}

bool RegularityReport::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

RegularityReport run_checks(const ReportInput& input, const std::vector<Check>& checks) {
  if (input.fields.empty()) throw std::invalid_argument("report needs at least one field");
  RegularityReport report;
  report.domain = describe(input.domain);
  for (const auto& u : input.fields) report.h.push_back(u.grid().h());
  Runner runner(input, report);
  for (Check c : checks) runner.run(c);
  return report;
}

void write_report(std::ostream& out, const RegularityReport& r) {
  out << "domain: " << r.domain << '\n';
  out << "refinements: " << r.h.size() << '\n';
  out << "h: " << join(r.h) << '\n';
  out << "all_pass: " << (r.all_pass() ? "yes" : "no") << '\n';
  for (const auto& v : r.verdicts) {
    out << "\n[" << check_name(v.check) << "]\n";
    switch (v.check) {
      case Check::concavity: out << "concavity_defect: " << join(r.concavity_defect) << '\n'; break;
      case Check::envelope:
        out << "envelope_defect: " << fmt(*r.envelope_defect) << '\n';
        out << "boundary_witness_nodes: " << *r.envelope_touching << '\n';
        break;
      case Check::cones:
        out << "cone_monotonicity_violation: " << fmt(*r.cone_monotonicity_violation) << '\n';
        out << "cone_endpoint_violation: " << fmt(*r.cone_endpoint_violation) << '\n';
        break;
      case Check::quadcone: out << "quad_cone_violation: " << join(r.quad_cone_violation) << '\n'; break;
      case Check::semiconcavity:
        out << "K_set: " << r.semiconcavity->K_set << '\n';
        out << "M: " << fmt(r.semiconcavity->M) << '\n';
        out << "C: " << fmt(r.semiconcavity->C) << '\n';
        out << "violation: " << fmt(r.semiconcavity->violation) << '\n';
        break;
      case Check::gradient: out << "gradient_osc: " << join(r.gradient_osc) << '\n'; break;
      case Check::blowup: out << "boundary_blowup_exponent: " << fmt(*r.boundary_blowup) << '\n'; break;
      case Check::decay:
        for (const auto& p : r.decay)
          out << "margin " << fmt(p.margin) << ": sup " << fmt(p.sup) << " bound " << fmt(p.bound) << '\n';
        break;
      case Check::comparison: out << "ordering_violations: " << *r.comparison_violations << '\n'; break;
      case Check::singularity:
        out << "witness_violation: " << fmt(*r.singularity_violation) << '\n';
        out << "smooth_control_violation: " << fmt(*r.singularity_control) << '\n';
        break;
    }
    out << "value: " << fmt(v.value) << '\n';
    out << "tolerance: " << fmt(v.tolerance) << '\n';
    out << "verdict: " << (v.pass ? "pass" : "fail") << '\n';
    if (!v.note.empty()) out << "note: " << v.note << '\n';
  }
}

void write_svg(std::ostream& out, const RegularityReport& r) {
  struct Series {
    std::string name;
    const std::vector<double>* values;
    const char* color;
  };
  const std::vector<Series> all{{"concavity", &r.concavity_defect, "#1f77b4"},
                                {"quadcone", &r.quad_cone_violation, "#d62728"},
                                {"gradient", &r.gradient_osc, "#2ca02c"}};
  std::vector<Series> series;
  double lo = INFINITY;
  double hi = -INFINITY;
  for (const auto& s : all) {
    if (s.values->size() != r.h.size()) continue;
    series.push_back(s);
    for (double v : *s.values) {
      if (v > 0.0) {
        lo = std::min(lo, std::log10(v));
        hi = std::max(hi, std::log10(v));
      }
    }
  }
  const double W = 480, H = 360, pad = 50;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  out << "<rect x=\"" << pad << "\" y=\"" << pad / 2 << "\" width=\"" << W - 1.5 * pad << "\" height=\"" << H - 1.5 * pad
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"" << H - 8 << "\" text-anchor=\"middle\">log10 h</text>\n";
  if (series.empty() || r.h.empty() || !(hi >= lo)) {
    out << "</svg>\n";
    return;
  }
  if (hi - lo < 1e-9) {
    lo -= 0.5;
    hi += 0.5;
  }
  double hmin = INFINITY;
  double hmax = -INFINITY;
  for (double h : r.h) {
    hmin = std::min(hmin, std::log10(h));
    hmax = std::max(hmax, std::log10(h));
  }
  if (hmax - hmin < 1e-9) {
    hmin -= 0.5;
    hmax += 0.5;
  }
  auto px = [&](double h) { return pad + (std::log10(h) - hmin) / (hmax - hmin) * (W - 1.5 * pad); };
  auto py = [&](double v) { return pad / 2 + (hi - std::log10(v)) / (hi - lo) * (H - 1.5 * pad); };
  double legend = pad / 2 + 16;
  for (const auto& s : series) {
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" points=\"";
    for (std::size_t i = 0; i < r.h.size(); ++i) {
      const double v = (*s.values)[i];
      if (v > 0.0) out << fmt(px(r.h[i])) << ',' << fmt(py(v)) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << pad + 8 << "\" y=\"" << legend << "\" fill=\"" << s.color << "\">" << s.name << "</text>\n";
    legend += 16;
  }
  out << "</svg>\n";
}

}  // namespace ninf
