#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "scaledim/io.hpp"
#include "scaledim/maps.hpp"

using namespace scaledim;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) {
    path = (std::filesystem::temp_directory_path() / name).string();
  }
  ~TempFile() { std::remove(path.c_str()); }
};

std::string first_line(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  return line;
}

}  // namespace

TEST_CASE("orbit csv round-trips bit for bit") {
  const Orbit orbit = henon_orbit(MapParams{}, {0.0, 0.0}, 1000, 500);
  TempFile file("scaledim_test_orbit.csv");
  io::write_orbit_csv(orbit, file.path);
  CHECK(first_line(file.path) == "x,y");

  const Orbit reread = io::read_points_csv(file.path);
  REQUIRE(reread.size() == orbit.size());
  for (std::size_t i = 0; i < orbit.size(); ++i) CHECK(reread.points[i] == orbit.points[i]);
}

TEST_CASE("microgrid snapshot round-trips exactly") {
  const Orbit orbit = henon_orbit(MapParams{}, {0.0, 0.0}, 1000, 1000);
  const MicroGrid grid = build_microgrid(orbit, henon_box(), 5000);
  TempFile file("scaledim_test_grid.csv");
  io::write_microgrid_csv(grid, file.path);

  const MicroGrid reread = io::read_microgrid_csv(file.path);
  CHECK(reread.box == grid.box);
  CHECK(reread.m == grid.m);
  CHECK(reread.n_points == grid.n_points);
  REQUIRE(reread.cells.size() == grid.cells.size());
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    CHECK(reread.cells[i].first == grid.cells[i].first);
    CHECK(reread.cells[i].second == grid.cells[i].second);
  }
}

TEST_CASE("microgrid snapshot validates count conservation") {
  TempFile file("scaledim_test_badgrid.csv");
  std::ofstream out(file.path);
  out << "x_min,x_max,y_min,y_max,m,n_points\n0,1,0,1,4,5\nix,iy,count\n0,0,2\n1,1,2\n";
  out.close();
  CHECK_THROWS_AS(io::read_microgrid_csv(file.path), Error);
}

TEST_CASE("scan csv round-trips schedule and entropies exactly") {
  const Orbit orbit = henon_orbit(MapParams{}, {0.0, 0.0}, 1000, 2000);
  const MicroGrid grid = build_microgrid(orbit, henon_box(), 20000);
  const auto schedule = scale_schedule(grid, 5, -3.0, -1.0);
  const ScaleScan scan = entropy_scan(grid, schedule, {0.0, 1.0, 2.0},
                                      dither_offsets(2, 5), Estimator::factorial);
  TempFile file("scaledim_test_scan.csv");
  io::write_scan_csv(scan, file.path);
  CHECK(first_line(file.path) == "k,e,log10_e_over_L,q,S_nats,n_offsets,estimator");

  const ScaleScan reread = io::read_scan_csv(file.path);
  CHECK(reread.schedule_matches(scan));
  CHECK(reread.boundary == Catch::Approx(scan.boundary).epsilon(1e-12));
  CHECK(reread.meta.n_offsets == scan.meta.n_offsets);
  CHECK(reread.meta.estimator == Estimator::factorial);
  REQUIRE(reread.s.size() == scan.s.size());
  for (std::size_t i = 0; i < scan.s.size(); ++i) CHECK(reread.s[i] == scan.s[i]);
}

TEST_CASE("profile writers emit the documented headers") {
  const Orbit lattice = uniform_lattice(16, unit_box());
  const MicroGrid grid = build_microgrid(lattice, unit_box(), 1200);
  const auto schedule = schedule_from_factors(grid, {75, 150, 300, 600});
  const ScaleScan scan =
      entropy_scan(grid, schedule, {0.0, 1.0}, dither_offsets(1, 0), Estimator::power);

  TempFile profile_file("scaledim_test_profile.csv");
  io::write_profiles_csv({scale_local(scan, 0.0), scale_local(scan, 1.0)},
                         profile_file.path);
  CHECK(first_line(profile_file.path) == "log10_e_over_L_mid,q,d,delta_log10_e");

  TempFile avg_file("scaledim_test_avg.csv");
  io::write_averages_csv({running_average(scan, 0.0, schedule.size() - 1)}, avg_file.path);
  CHECK(first_line(avg_file.path) == "log10_e_over_L,q,dbar,anchor_log10");

  TempFile transport_file("scaledim_test_transport.csv");
  io::write_transport_csv(dimension_transport(scan, scan, 0.0), transport_file.path);
  CHECK(first_line(transport_file.path) == "log10_e_over_L_mid,q,delta_d,I_nats");
}
