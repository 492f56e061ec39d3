#include "fbz/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "fbz/error.hpp"

namespace fbz {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Location {
  std::string key;
  int line;
  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError("config line " + std::to_string(line) + ": key '" + key + "': " + what);
  }
};

double to_double(const std::string& v, const Location& at) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) at.fail("expected a number, got '" + v + "'");
  return out;
}

long long to_integer(const std::string& v, const Location& at) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) at.fail("expected an integer, got '" + v + "'");
  return out;
}

std::vector<double> to_list(const std::string& v, const Location& at) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) at.fail("empty list entry");
    out.push_back(to_double(item, at));
  }
  return out;
}

using Setter = std::function<void(SimConfig&, const std::string&, const Location&)>;

std::map<std::string, Setter> setters(const std::filesystem::path& base_dir) {
  std::map<std::string, Setter> m;
  auto integer = [](auto member_fn) {
    return [member_fn](SimConfig& c, const std::string& v, const Location& at) {
      member_fn(c) = static_cast<std::remove_reference_t<decltype(member_fn(c))>>(to_integer(v, at));
    };
  };
  auto real = [](auto member_fn) {
    return [member_fn](SimConfig& c, const std::string& v, const Location& at) {
      member_fn(c) = to_double(v, at);
    };
  };
  m["grid.dx"] = integer([](SimConfig& c) -> int& { return c.grid.dx; });
  m["grid.Lx"] = real([](SimConfig& c) -> double& { return c.grid.Lx; });
  m["grid.Nx"] = integer([](SimConfig& c) -> int& { return c.grid.Nx; });
  m["grid.vmax"] = real([](SimConfig& c) -> double& { return c.grid.vmax; });
  m["grid.Nv"] = integer([](SimConfig& c) -> int& { return c.grid.Nv; });
  m["grid.Nomega"] = integer([](SimConfig& c) -> int& { return c.grid.Nomega; });
  m["kernel.mu"] = real([](SimConfig& c) -> double& { return c.kernel.mu; });
  m["kernel.b"] = [](SimConfig& c, const std::string& v, const Location& at) {
    if (v != "constant" && v != "cos2" && v != "table") at.fail("expected constant, cos2 or table");
    c.kernel.b_profile = v;
  };
  m["kernel.b_value"] = real([](SimConfig& c) -> double& { return c.kernel.b_value; });
  m["kernel.b_table"] = [](SimConfig& c, const std::string& v, const Location& at) {
    c.kernel.b_table = to_list(v, at);
  };
  m["kernel.K_images"] = integer([](SimConfig& c) -> int& { return c.kernel.K_images; });
  m["mode"] = [](SimConfig& c, const std::string& v, const Location& at) {
    if (v == "fuzzy")
      c.mode = CouplingMode::Fuzzy;
    else if (v == "local")
      c.mode = CouplingMode::Local;
    else
      at.fail("expected fuzzy or local");
  };
  m["sigma"] = [](SimConfig& c, const std::string& v, const Location& at) {
    c.sigma = to_double(v, at);
    if (!(c.sigma > 0.0 && c.sigma <= 1.0))
      at.fail("sigma must lie in (0, 1]; use mode=local for the classical limit");
  };
  m["ic.id"] = [](SimConfig& c, const std::string& v, const Location&) { c.ic.id = v; };
  m["ic.rho"] = real([](SimConfig& c) -> double& { return c.ic.rho; });
  m["ic.ux"] = real([](SimConfig& c) -> double& { return c.ic.ux; });
  m["ic.uy"] = real([](SimConfig& c) -> double& { return c.ic.uy; });
  m["ic.T"] = real([](SimConfig& c) -> double& { return c.ic.T; });
  m["ic.a"] = real([](SimConfig& c) -> double& { return c.ic.a; });
  m["ic.bump_offset"] = real([](SimConfig& c) -> double& { return c.ic.bump_offset; });
  m["ic.half_width"] = real([](SimConfig& c) -> double& { return c.ic.half_width; });
  m["ic.noise"] = real([](SimConfig& c) -> double& { return c.ic.noise; });
  m["ic.path"] = [base_dir](SimConfig& c, const std::string& v, const Location&) {
    std::filesystem::path p(v);
    c.ic.path = p.is_absolute() || base_dir.empty() ? p : base_dir / p;
  };
  m["time.T_final"] = real([](SimConfig& c) -> double& { return c.T_final; });
  m["time.dt"] = real([](SimConfig& c) -> double& { return c.dt; });
  m["time.cfl_eta"] = real([](SimConfig& c) -> double& { return c.cfl_eta; });
  m["output.stride"] = integer([](SimConfig& c) -> int& { return c.output_stride; });
  m["output.dir"] = [base_dir](SimConfig& c, const std::string& v, const Location&) {
    std::filesystem::path p(v);
    c.output_dir = p.is_absolute() || base_dir.empty() ? p : base_dir / p;
  };
  m["diag.dissipation_stride"] = integer([](SimConfig& c) -> int& { return c.dissipation_stride; });
  m["diag.moments"] = [](SimConfig& c, const std::string& v, const Location& at) {
    c.moment_orders = v.empty() ? std::vector<double>{} : to_list(v, at);
  };
  m["seed"] = [](SimConfig& c, const std::string& v, const Location& at) {
    const long long s = to_integer(v, at);
    if (s < 0) at.fail("seed must be >= 0");
    c.seed = static_cast<std::uint64_t>(s);
  };
  m["workers"] = [](SimConfig& c, const std::string& v, const Location& at) {
    const long long w = to_integer(v, at);
    if (w < 0) at.fail("workers must be >= 0");
    c.workers = static_cast<unsigned>(w);
  };
  return m;
}

}  // namespace

SimConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  SimConfig c;
  const auto table = setters(base_dir);
  std::set<std::string> seen;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(line) + ": expected key=value");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    const Location at{key, line};
    const auto it = table.find(key);
    if (it == table.end()) at.fail("unknown key");
    if (!seen.insert(key).second) at.fail("duplicate key");
    it->second(c, value, at);
  }
  if (!seen.count("time.dt")) {
    c.dt = 1.0;  // placeholder so validation of the other fields can run
    c.validate();
    c.dt = cfl_preview_dt(c);
  }
  c.validate();
  return c;
}

SimConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open '" + path.string() + "'");
  return parse_config(in, path.parent_path());
}

void write_config(std::ostream& out, const SimConfig& c) {
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  auto list = [&](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
    return s;
  };
  out << "grid.dx=" << c.grid.dx << "\ngrid.Lx=" << num(c.grid.Lx) << "\ngrid.Nx=" << c.grid.Nx
      << "\ngrid.vmax=" << num(c.grid.vmax) << "\ngrid.Nv=" << c.grid.Nv
      << "\ngrid.Nomega=" << c.grid.Nomega << "\nkernel.mu=" << num(c.kernel.mu)
      << "\nkernel.b=" << c.kernel.b_profile << "\nkernel.b_value=" << num(c.kernel.b_value);
  if (!c.kernel.b_table.empty()) out << "\nkernel.b_table=" << list(c.kernel.b_table);
  out << "\nkernel.K_images=" << c.kernel.K_images
      << "\nmode=" << (c.mode == CouplingMode::Fuzzy ? "fuzzy" : "local")
      << "\nsigma=" << num(c.sigma) << "\nic.id=" << c.ic.id << "\nic.rho=" << num(c.ic.rho)
      << "\nic.ux=" << num(c.ic.ux) << "\nic.uy=" << num(c.ic.uy) << "\nic.T=" << num(c.ic.T)
      << "\nic.a=" << num(c.ic.a) << "\nic.bump_offset=" << num(c.ic.bump_offset)
      << "\nic.half_width=" << num(c.ic.half_width) << "\nic.noise=" << num(c.ic.noise);
  if (!c.ic.path.empty()) out << "\nic.path=" << c.ic.path.string();
  out << "\ntime.T_final=" << num(c.T_final) << "\ntime.dt=" << num(c.dt)
      << "\ntime.cfl_eta=" << num(c.cfl_eta) << "\noutput.stride=" << c.output_stride
      << "\noutput.dir=" << c.output_dir.string()
      << "\ndiag.dissipation_stride=" << c.dissipation_stride
      << "\ndiag.moments=" << list(c.moment_orders) << "\nseed=" << c.seed
      << "\nworkers=" << c.workers << "\n";
}

}  // namespace fbz
