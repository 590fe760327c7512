#include "sfi/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "sfi/errors.hpp"

namespace sfi {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);  // binary: keep '\n' on every platform
  if (!f) throw Error("cannot open output file " + path);
  return f;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_density_csv(const std::string& path, const DensityGrid& d,
                       const std::vector<double>& score) {
  auto f = open_out(path);
  const bool with_score = !score.empty();
  f << "x,value,derivative" << (with_score ? ",score" : "") << "\n";
  for (std::size_t i = 0; i < d.grid.count; ++i) {
    f << format_double(d.grid.node(i)) << ',' << format_double(d.values[i]) << ','
      << format_double(d.derivative[i]);
    if (with_score) f << ',' << format_double(score[i]);
    f << "\n";
  }
}

void write_charfn_csv(const std::string& path, const CharFnGrid& fg) {
  auto f = open_out(path);
  f << "t,re,im\n";
  for (std::size_t k = 0; k < fg.grid.count; ++k)
    f << format_double(fg.grid.node(k)) << ',' << format_double(fg.values[k].real()) << ','
      << format_double(fg.values[k].imag()) << "\n";
}

void write_reports_csv(const std::string& path, const std::vector<InequalityReport>& reports) {
  auto f = open_out(path);
  f << "name,lhs,rhs,margin,satisfied,vacuous,witness\n";
  for (const auto& r : reports) {
    f << r.name << ',' << format_double(r.lhs) << ',' << format_double(r.rhs) << ','
      << format_double(r.margin) << ',' << (r.satisfied ? 1 : 0) << ',' << (r.vacuous ? 1 : 0)
      << ',' << (r.witness ? format_double(*r.witness) : std::string("")) << "\n";
  }
}

void write_convergence_csv(const std::string& path, const std::vector<ConvergenceRow>& rows) {
  auto f = open_out(path);
  f << "n,fisher,rel_fisher,rel_entropy,sup_gap,sup_deriv_gap,moment,failed,error\n";
  for (const auto& r : rows) {
    f << r.n << ',' << format_double(r.fisher) << ',' << format_double(r.rel_fisher) << ','
      << format_double(r.rel_entropy) << ',' << format_double(r.sup_density_gap) << ','
      << format_double(r.sup_deriv_gap) << ',' << format_double(r.moment_delta) << ','
      << (r.failed ? 1 : 0) << ',' << r.error << "\n";
  }
}

void write_values_csv(const std::string& path,
                      const std::vector<std::pair<std::string, double>>& values) {
  auto f = open_out(path);
  f << "name,value\n";
  for (const auto& [name, v] : values) f << name << ',' << format_double(v) << "\n";
}

void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.empty()) throw ValidationError("plot needs matching x/y data");
  const double w = 640.0, h = 480.0, m = 60.0;
  double lx0 = 1e300, lx1 = -1e300, ly0 = 1e300, ly1 = -1e300;
  std::vector<double> lx(xs.size()), ly(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0 && ys[i] > 0.0)) throw ValidationError("log-log plot needs positive data");
    lx[i] = std::log10(xs[i]);
    ly[i] = std::log10(ys[i]);
    lx0 = std::min(lx0, lx[i]);
    lx1 = std::max(lx1, lx[i]);
    ly0 = std::min(ly0, ly[i]);
    ly1 = std::max(ly1, ly[i]);
  }
  if (lx1 == lx0) lx1 = lx0 + 1.0;
  if (ly1 == ly0) ly1 = ly0 + 1.0;
  auto X = [&](double v) { return m + (v - lx0) / (lx1 - lx0) * (w - 2 * m); };
  auto Y = [&](double v) { return h - m - (v - ly0) / (ly1 - ly0) * (h - 2 * m); };

  auto f = open_out(path);
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
    << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
  f << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  f << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\">"
    << title << "</text>\n";
  f << "<rect x=\"" << m << "\" y=\"" << m << "\" width=\"" << w - 2 * m << "\" height=\""
    << h - 2 * m << "\" fill=\"none\" stroke=\"black\"/>\n";
  f << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < lx.size(); ++i)
    f << format_double(X(lx[i])) << ',' << format_double(Y(ly[i])) << ' ';
  f << "\"/>\n";
  for (std::size_t i = 0; i < lx.size(); ++i)
    f << "<circle cx=\"" << format_double(X(lx[i])) << "\" cy=\"" << format_double(Y(ly[i]))
      << "\" r=\"3\" fill=\"steelblue\"/>\n";
  f << "</svg>\n";
}

}  // namespace sfi
