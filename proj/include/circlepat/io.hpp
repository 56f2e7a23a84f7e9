#pragma once

// Text formats read and written by the command line tool.
//
//   surface <name>
//   vertex <id>
//   edge <id> : <v1> <v2> [theta=<radians> | theta=pi*<p>/<q>]
//   face <id> : <+/-edge-id> ...
//
//   radii for <surface-name> residual <value>
//   radius <vertex-id> <value>
//
//   region for face <id>
//   corner <x> <y>
//
// '#' starts a comment. Serialization is canonical: records sorted by id.

#include <complex>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "circlepat/surface.hpp"

namespace circlepat {

struct SurfaceFile {
    CellularSurface surface;
    EdgeWeights weights;
    // Angle text exactly as written, empty when the theta attribute was absent.
    std::vector<std::string> theta_literals;
};

// Decimal radians or pi*p/q (also pi, pi*p, pi/q).
double parse_angle(const std::string& text);

SurfaceFile parse_surface(std::istream& in);
SurfaceFile parse_surface_text(const std::string& text);
SurfaceFile load_surface(const std::filesystem::path& path);
std::string serialize_surface(const SurfaceFile& file);
// Builds a file record whose weights print as shortest round-trip decimals;
// weights equal to zero are left implicit.
SurfaceFile make_surface_file(CellularSurface surface, EdgeWeights weights);

struct RadiiFile {
    std::string surface_name;
    double residual = 0.0;
    std::vector<std::pair<int, double>> radii;  // (vertex id, radius)
};

RadiiFile parse_radii(std::istream& in);
RadiiFile load_radii(const std::filesystem::path& path);
std::string serialize_radii(const RadiiFile& file);
// Radii ordered by vertex index of `s`; throws ParseError on mismatch.
std::vector<double> radii_for_surface(const RadiiFile& file, const CellularSurface& s);

struct RegionFile {
    int face_id = 0;
    std::vector<std::complex<double>> corners;  // counterclockwise
};

RegionFile parse_region(std::istream& in);
RegionFile load_region(const std::filesystem::path& path);
std::string serialize_region(const RegionFile& file);
// Throws ParseError unless the polygon is simple, counterclockwise, >= 3 corners.
void check_region_polygon(const std::vector<std::complex<double>>& corners);

// Write via a temporary file in the same directory and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

// Shortest decimal that parses back to the same double.
std::string format_roundtrip(double x);

}  // namespace circlepat
