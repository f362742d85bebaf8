#include <algorithm>
#include <cmath>
#include <sstream>

#include "cdeform/domain.hpp"

namespace cdeform {

namespace {

std::int64_t cells(double extent, double h, const char* name) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InputError("grid spacing h must be positive");
  if (!(extent > 0.0) || !std::isfinite(extent))
    throw InputError(std::string(name) + " must be positive");
  const double n = std::round(extent / h);
  if (n < 1.0) throw InputError(std::string(name) + " is smaller than the grid spacing");
  if (n > 1e5) throw InputError(std::string(name) + "/h is too large");
  return static_cast<std::int64_t>(n);
}

void check_connectivity(int conn) {
  if (conn != 4 && conn != 8) throw InputError("connectivity must be 4 or 8");
}

// Rectangular lattice with columns [i0, i1] and rows [j0, j1]; vertex ids are
// row-major starting at the lowest row.
class Lattice {
 public:
  Lattice(std::int64_t i0, std::int64_t i1, std::int64_t j0, std::int64_t j1, double h,
          double x0, double y0)
      : i0_(i0), j0_(j0), cols_(i1 - i0 + 1), rows_(j1 - j0 + 1), h_(h), x0_(x0), y0_(y0) {}

  std::int64_t id(std::int64_t i, std::int64_t j) const { return (j - j0_) * cols_ + (i - i0_); }

  MetricDomain::Input input(int conn) const {
    MetricDomain::Input in;
    in.coord_dim = 2;
    in.ids.reserve(cols_ * rows_);
    in.coords.reserve(cols_ * rows_);
    for (std::int64_t r = 0; r < rows_; ++r) {
      for (std::int64_t c = 0; c < cols_; ++c) {
        in.ids.push_back(r * cols_ + c);
        in.coords.push_back({x0_ + static_cast<double>(c) * h_, y0_ + static_cast<double>(r) * h_, 0.0});
      }
    }
    const double diag = h_ * std::sqrt(2.0);
    for (std::int64_t r = 0; r < rows_; ++r) {
      for (std::int64_t c = 0; c < cols_; ++c) {
        const auto here = r * cols_ + c;
        if (c + 1 < cols_) add(in, here, here + 1, h_);
        if (r + 1 < rows_) add(in, here, here + cols_, h_);
        if (conn == 8 && r + 1 < rows_) {
          if (c + 1 < cols_) add(in, here, here + cols_ + 1, diag);
          if (c > 0) add(in, here, here + cols_ - 1, diag);
        }
      }
    }
    return in;
  }

 private:
  static void add(MetricDomain::Input& in, std::int64_t a, std::int64_t b, double len) {
    in.edges.push_back({a, b});
    in.lengths.push_back(len);
  }

  std::int64_t i0_, j0_, cols_, rows_;
  double h_, x0_, y0_;
};

}  // namespace

MetricDomain half_plane(double width, double height, double h, int connectivity) {
  check_connectivity(connectivity);
  const auto nx = cells(width, h, "W");
  const auto ny = cells(height, h, "R");
  const Lattice grid(0, nx, 0, ny, h, -0.5 * static_cast<double>(nx) * h, 0.0);
  auto in = grid.input(connectivity);
  for (std::int64_t i = 0; i <= nx; ++i) {
    in.boundary.push_back(grid.id(i, 0));
    in.frontier.push_back(grid.id(i, ny));
  }
  in.meta.generator = "half_plane";
  in.meta.params = {{"W", width}, {"R", height}, {"h", h}, {"conn", connectivity}};
  return MetricDomain::build(std::move(in));
}

MetricDomain strip(double width, double h, int connectivity) {
  check_connectivity(connectivity);
  const auto nx = cells(width, h, "W");
  const auto ny = cells(1.0, h, "height");
  const Lattice grid(0, nx, 0, ny, h, -0.5 * static_cast<double>(nx) * h, 0.0);
  auto in = grid.input(connectivity);
  for (std::int64_t i = 0; i <= nx; ++i) in.boundary.push_back(grid.id(i, 0));
  in.meta.generator = "strip";
  in.meta.params = {{"W", width}, {"h", h}, {"conn", connectivity}};
  return MetricDomain::build(std::move(in));
}

MetricDomain slit_plane(double radius, double h, int connectivity) {
  check_connectivity(connectivity);
  const auto n = cells(radius, h, "R");
  const double origin = -static_cast<double>(n) * h;
  const Lattice grid(-n, n, -n, n, h, origin, origin);
  auto in = grid.input(connectivity);
  for (std::int64_t i = -n; i <= 0; ++i) in.boundary.push_back(grid.id(i, 0));
  for (std::int64_t j = -n; j <= n; ++j) {
    for (std::int64_t i = -n; i <= n; ++i) {
      const bool outer = j == -n || j == n || i == n;
      if (outer) in.frontier.push_back(grid.id(i, j));
    }
  }
  in.meta.generator = "slit_plane";
  in.meta.params = {{"R", radius}, {"h", h}, {"conn", connectivity}};
  return MetricDomain::build(std::move(in));
}

GeneratorSpec GeneratorSpec::parse(const std::string& text) {
  GeneratorSpec spec;
  const auto colon = text.find(':');
  spec.name = text.substr(0, colon);
  if (spec.name.empty()) throw InputError("empty generator name");
  if (colon == std::string::npos) return spec;
  std::stringstream rest(text.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("generator parameter without value: " + item);
    const auto key = item.substr(0, eq);
    const auto val = item.substr(eq + 1);
    try {
      std::size_t used = 0;
      spec.params[key] = std::stod(val, &used);
      if (used != val.size()) throw std::invalid_argument(val);
    } catch (const std::exception&) {
      throw InputError("bad numeric value for generator parameter " + key + ": " + val);
    }
  }
  return spec;
}

std::string GeneratorSpec::to_string() const {
  std::ostringstream os;
  os << name;
  char sep = ':';
  for (const auto& [k, v] : params) {
    os << sep << k << '=' << v;
    sep = ',';
  }
  return os.str();
}

MetricDomain generate_domain(const GeneratorSpec& spec) {
  auto need = [&](const char* key) {
    auto it = spec.params.find(key);
    if (it == spec.params.end())
      throw InputError("generator " + spec.name + " needs parameter " + key);
    return it->second;
  };
  auto conn = [&] {
    auto it = spec.params.find("conn");
    return it == spec.params.end() ? 8 : static_cast<int>(it->second);
  };
  for (const auto& [k, _] : spec.params) {
    static const char* known[] = {"W", "R", "h", "conn"};
    if (std::find(std::begin(known), std::end(known), k) == std::end(known))
      throw InputError("unknown generator parameter " + k);
  }
  if (spec.name == "half_plane") return half_plane(need("W"), need("R"), need("h"), conn());
  if (spec.name == "strip") return strip(need("W"), need("h"), conn());
  if (spec.name == "slit_plane") return slit_plane(need("R"), need("h"), conn());
  throw InputError("unknown generator " + spec.name);
}

}  // namespace cdeform
