#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "scaledim/dimension.hpp"
#include "scaledim/entropy.hpp"
#include "scaledim/errors.hpp"
#include "scaledim/grid.hpp"
#include "scaledim/maps.hpp"
#include "scaledim/transport.hpp"

namespace scaledim {
namespace io {

namespace detail {

/// Shortest representation that round-trips exactly.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view field, const std::string& context) {
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
    throw Error("bad numeric field '" + std::string(field) + "' in " + context);
  return v;
}

inline std::uint64_t parse_u64(std::string_view field, const std::string& context) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
    throw Error("bad integer field '" + std::string(field) + "' in " + context);
  return v;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  return out;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  return in;
}

inline std::string next_line(std::ifstream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) throw Error("unexpected end of file in '" + path + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace detail

// ---- orbit point lists ----------------------------------------------------

inline void write_orbit_csv(const Orbit& orbit, const std::string& path) {
  std::ofstream out = detail::open_out(path);
  out << "x,y\n";
  for (const Point2& p : orbit.points)
    out << detail::format_double(p.x) << ',' << detail::format_double(p.y) << '\n';
  if (!out) throw Error("write failed for '" + path + "'");
}

inline Orbit read_points_csv(const std::string& path) {
  std::ifstream in = detail::open_in(path);
  const std::string header = detail::next_line(in, path);
  if (header != "x,y") throw Error("'" + path + "': expected header 'x,y'");
  Orbit orbit;
  orbit.meta.generator = "file";
  orbit.meta.descriptor = path;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = detail::split_csv(line);
    if (fields.size() != 2) throw Error("'" + path + "': expected two fields per row");
    orbit.points.push_back(Point2{detail::parse_double(fields[0], path),
                                  detail::parse_double(fields[1], path)});
  }
  orbit.meta.n_keep = orbit.points.size();
  return orbit;
}

// ---- micro grid snapshots ---------------------------------------------------

/// Header row (box, m, N) followed by zero-suppressed `ix,iy,count` records.
inline void write_microgrid_csv(const MicroGrid& grid, const std::string& path) {
  std::ofstream out = detail::open_out(path);
  out << "x_min,x_max,y_min,y_max,m,n_points\n";
  out << detail::format_double(grid.box.x_min) << ',' << detail::format_double(grid.box.x_max)
      << ',' << detail::format_double(grid.box.y_min) << ','
      << detail::format_double(grid.box.y_max) << ',' << grid.m << ',' << grid.n_points
      << '\n';
  out << "ix,iy,count\n";
  for (const auto& [key, count] : grid.cells)
    out << scaledim::detail::cell_ix(key) << ',' << scaledim::detail::cell_iy(key) << ','
        << count << '\n';
  if (!out) throw Error("write failed for '" + path + "'");
}

inline MicroGrid read_microgrid_csv(const std::string& path) {
  std::ifstream in = detail::open_in(path);
  if (detail::next_line(in, path) != "x_min,x_max,y_min,y_max,m,n_points")
    throw Error("'" + path + "': bad micro grid header");
  const std::string meta_line = detail::next_line(in, path);
  const auto meta = detail::split_csv(meta_line);
  if (meta.size() != 6) throw Error("'" + path + "': bad micro grid header row");

  MicroGrid grid;
  grid.box = Box2{detail::parse_double(meta[0], path), detail::parse_double(meta[1], path),
                  detail::parse_double(meta[2], path), detail::parse_double(meta[3], path)};
  grid.box.validate();
  grid.m = detail::parse_u64(meta[4], path);
  grid.e0 = grid.box.boundary() / static_cast<double>(grid.m);
  grid.n_points = detail::parse_u64(meta[5], path);

  if (detail::next_line(in, path) != "ix,iy,count")
    throw Error("'" + path + "': bad micro grid record header");
  std::string line;
  std::uint64_t total = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = detail::split_csv(line);
    if (fields.size() != 3) throw Error("'" + path + "': expected three fields per record");
    const std::uint64_t ix = detail::parse_u64(fields[0], path);
    const std::uint64_t iy = detail::parse_u64(fields[1], path);
    const std::uint64_t count = detail::parse_u64(fields[2], path);
    if (ix >= grid.m || iy >= grid.m) throw Error("'" + path + "': cell index out of range");
    grid.cells.emplace_back(scaledim::detail::pack_cell(ix, iy), count);
    total += count;
  }
  scaledim::detail::sort_and_merge(grid.cells);
  if (total != grid.n_points)
    throw Error("'" + path + "': occupancies sum to " + std::to_string(total) +
                ", header says " + std::to_string(grid.n_points));
  return grid;
}

// ---- entropy scans ----------------------------------------------------------

inline void write_scan_csv(const ScaleScan& scan, const std::string& path) {
  std::ofstream out = detail::open_out(path);
  out << "k,e,log10_e_over_L,q,S_nats,n_offsets,estimator\n";
  for (std::size_t si = 0; si < scan.schedule.size(); ++si) {
    const ScalePoint& sp = scan.schedule[si];
    for (std::size_t qi = 0; qi < scan.qs.size(); ++qi) {
      out << sp.k << ',' << detail::format_double(sp.e) << ','
          << detail::format_double(sp.log10_e_over_L) << ','
          << detail::format_double(scan.qs[qi]) << ','
          << detail::format_double(scan.s_at(si, qi)) << ',' << scan.meta.n_offsets << ','
          << estimator_name(scan.effective_estimator(scan.qs[qi])) << '\n';
    }
  }
  if (!out) throw Error("write failed for '" + path + "'");
}

inline ScaleScan read_scan_csv(const std::string& path) {
  std::ifstream in = detail::open_in(path);
  if (detail::next_line(in, path) != "k,e,log10_e_over_L,q,S_nats,n_offsets,estimator")
    throw Error("'" + path + "': bad scan header");

  ScaleScan scan;
  bool saw_factorial = false;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = detail::split_csv(line);
    if (fields.size() != 7) throw Error("'" + path + "': expected seven fields per row");

    ScalePoint sp;
    sp.k = detail::parse_u64(fields[0], path);
    sp.e = detail::parse_double(fields[1], path);
    sp.log10_e_over_L = detail::parse_double(fields[2], path);
    const double q = detail::parse_double(fields[3], path);
    const double s = detail::parse_double(fields[4], path);
    scan.meta.n_offsets = detail::parse_u64(fields[5], path);
    if (std::string(fields[6]) == "factorial") saw_factorial = true;

    if (scan.schedule.empty() || !(scan.schedule.back() == sp)) scan.schedule.push_back(sp);
    bool q_known = false;
    for (double known : scan.qs) q_known = q_known || known == q;
    if (!q_known) scan.qs.push_back(q);
    scan.s.push_back(s);
  }
  if (scan.schedule.empty()) throw Error("'" + path + "': empty scan");
  if (scan.s.size() != scan.schedule.size() * scan.qs.size())
    throw Error("'" + path + "': inconsistent scan shape");
  scan.boundary = scan.schedule.front().e / std::pow(10.0, scan.schedule.front().log10_e_over_L);
  scan.meta.estimator = saw_factorial ? Estimator::factorial : Estimator::power;
  return scan;
}

// ---- derived profiles -------------------------------------------------------

inline void write_profiles_csv(const std::vector<DimensionProfile>& profiles,
                               const std::string& path) {
  std::ofstream out = detail::open_out(path);
  out << "log10_e_over_L_mid,q,d,delta_log10_e\n";
  for (const DimensionProfile& p : profiles)
    for (std::size_t i = 0; i < p.d.size(); ++i)
      out << detail::format_double(p.mid_log10[i]) << ',' << detail::format_double(p.q) << ','
          << detail::format_double(p.d[i]) << ',' << detail::format_double(p.delta_log10[i])
          << '\n';
  if (!out) throw Error("write failed for '" + path + "'");
}

inline void write_averages_csv(const std::vector<AverageProfile>& profiles,
                               const std::string& path) {
  std::ofstream out = detail::open_out(path);
  out << "log10_e_over_L,q,dbar,anchor_log10\n";
  for (const AverageProfile& p : profiles)
    for (std::size_t i = 0; i < p.dbar.size(); ++i)
      out << detail::format_double(p.log10_e[i]) << ',' << detail::format_double(p.q) << ','
          << detail::format_double(p.dbar[i]) << ','
          << detail::format_double(p.anchor_log10) << '\n';
  if (!out) throw Error("write failed for '" + path + "'");
}

inline void write_transport_csv(const TransportProfile& profile, const std::string& path) {
  std::ofstream out = detail::open_out(path);
  out << "log10_e_over_L_mid,q,delta_d,I_nats\n";
  for (std::size_t i = 0; i < profile.delta_d.size(); ++i)
    out << detail::format_double(profile.mid_log10[i]) << ','
        << detail::format_double(profile.q) << ',' << detail::format_double(profile.delta_d[i])
        << ',' << detail::format_double(profile.information[i]) << '\n';
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace io
}  // namespace scaledim
