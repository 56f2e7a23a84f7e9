#include "circlepat/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unistd.h>

#include "circlepat/errors.hpp"
#include "circlepat/hypgeo.hpp"

namespace circlepat {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::string body = line.substr(0, line.find('#'));
    std::istringstream is(body);
    std::vector<std::string> out;
    for (std::string t; is >> t;) out.push_back(t);
    return out;
}

long long parse_integer(const std::string& text, int line) {
    long long value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && text[0] == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last) throw ParseError("expected an integer, got '" + text + "'", line);
    return value;
}

int parse_id(const std::string& text, int line) {
    const long long v = parse_integer(text, line);
    if (v < 0 || v > 1'000'000'000) throw ParseError("id out of range: " + text, line);
    return static_cast<int>(v);
}

double parse_real(const std::string& text, int line) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && text[0] == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last || !std::isfinite(value))
        throw ParseError("expected a real number, got '" + text + "'", line);
    return value;
}

void expect_colon(const std::vector<std::string>& tok, std::size_t pos, int line) {
    if (tok.size() <= pos || tok[pos] != ":") throw ParseError("expected ':'", line);
}

}  // namespace

std::string format_roundtrip(double x) {
    char buf[64];
    if (x == 0.0) x = 0.0;  // drop the sign of zero
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

double parse_angle(const std::string& text) {
    if (text.rfind("pi", 0) == 0) {
        std::string rest = text.substr(2);
        long long p = 1;
        long long q = 1;
        if (!rest.empty() && rest[0] == '*') {
            const auto slash = rest.find('/');
            p = parse_integer(rest.substr(1, slash == std::string::npos ? std::string::npos : slash - 1), 0);
            rest = slash == std::string::npos ? "" : rest.substr(slash);
        }
        if (!rest.empty()) {
            if (rest[0] != '/') throw ParseError("malformed angle '" + text + "'", 0);
            q = parse_integer(rest.substr(1), 0);
            if (q <= 0) throw ParseError("angle denominator must be positive", 0);
        }
        return kPi * static_cast<double>(p) / static_cast<double>(q);
    }
    return parse_real(text, 0);
}

SurfaceFile parse_surface(std::istream& in) {
    struct RawEdge {
        int id, a, b, line;
        double theta;
        std::string literal;
    };
    struct RawFace {
        int id, line;
        std::vector<std::pair<int, bool>> uses;
    };
    std::string name;
    bool have_header = false;
    std::map<int, int> vertex_lines;
    std::map<int, RawEdge> edges;
    std::map<int, RawFace> faces;

    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto tok = tokenize(raw);
        if (tok.empty()) continue;
        if (!have_header) {
            if (tok[0] != "surface" || tok.size() != 2) throw ParseError("expected 'surface <name>' header", line);
            name = tok[1];
            have_header = true;
            continue;
        }
        if (tok[0] == "vertex") {
            if (tok.size() != 2) throw ParseError("expected 'vertex <id>'", line);
            const int id = parse_id(tok[1], line);
            if (!vertex_lines.emplace(id, line).second) throw ParseError("duplicate vertex " + tok[1], line);
        } else if (tok[0] == "edge") {
            if (tok.size() != 5 && tok.size() != 6) throw ParseError("expected 'edge <id> : <v1> <v2> [theta=..]'", line);
            expect_colon(tok, 2, line);
            RawEdge e{parse_id(tok[1], line), parse_id(tok[3], line), parse_id(tok[4], line), line, 0.0, ""};
            if (tok.size() == 6) {
                if (tok[5].rfind("theta=", 0) != 0) throw ParseError("unknown edge attribute '" + tok[5] + "'", line);
                e.literal = tok[5].substr(6);
                try {
                    e.theta = parse_angle(e.literal);
                } catch (const ParseError& err) {
                    throw ParseError(err.what(), line);
                }
            }
            if (!edges.emplace(e.id, e).second) throw ParseError("duplicate edge " + tok[1], line);
        } else if (tok[0] == "face") {
            if (tok.size() < 4) throw ParseError("expected 'face <id> : <edges>'", line);
            expect_colon(tok, 2, line);
            RawFace f{parse_id(tok[1], line), line, {}};
            for (std::size_t i = 3; i < tok.size(); ++i) {
                const bool backward = tok[i][0] == '-';
                const std::string body = (tok[i][0] == '-' || tok[i][0] == '+') ? tok[i].substr(1) : tok[i];
                f.uses.emplace_back(parse_id(body, line), !backward);
            }
            if (!faces.emplace(f.id, f).second) throw ParseError("duplicate face " + tok[1], line);
        } else {
            throw ParseError("unknown record '" + tok[0] + "'", line);
        }
    }
    if (!have_header) throw ParseError("empty surface file", line);

    std::vector<int> vertex_ids;
    std::map<int, int> vindex;
    for (const auto& [id, l] : vertex_lines) {
        vindex[id] = static_cast<int>(vertex_ids.size());
        vertex_ids.push_back(id);
    }
    std::vector<Edge> es;
    EdgeWeights weights;
    std::vector<std::string> literals;
    std::map<int, int> eindex;
    for (const auto& [id, e] : edges) {
        const auto a = vindex.find(e.a);
        const auto b = vindex.find(e.b);
        if (a == vindex.end() || b == vindex.end()) throw ParseError("edge " + std::to_string(id) + " uses an undeclared vertex", e.line);
        eindex[id] = static_cast<int>(es.size());
        es.push_back({id, a->second, b->second});
        weights.push_back(e.theta);
        literals.push_back(e.literal);
    }
    std::vector<Face> fs;
    for (const auto& [id, f] : faces) {
        Face face{id, {}};
        for (const auto& [eid, fwd] : f.uses) {
            const auto it = eindex.find(eid);
            if (it == eindex.end()) throw ParseError("face " + std::to_string(id) + " uses undeclared edge " + std::to_string(eid), f.line);
            face.boundary.push_back({it->second, fwd});
        }
        fs.push_back(std::move(face));
    }
    return {CellularSurface(name, std::move(vertex_ids), std::move(es), std::move(fs)), std::move(weights),
            std::move(literals)};
}

SurfaceFile parse_surface_text(const std::string& text) {
    std::istringstream is(text);
    return parse_surface(is);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IOError("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

SurfaceFile load_surface(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IOError("cannot open " + path.string());
    return parse_surface(in);
}

std::string serialize_surface(const SurfaceFile& file) {
    const auto& s = file.surface;
    std::ostringstream os;
    os << "surface " << s.name() << "\n";
    for (int v = 0; v < s.num_vertices(); ++v) os << "vertex " << s.vertex_id(v) << "\n";
    for (int e = 0; e < s.num_edges(); ++e) {
        const auto& ed = s.edge(e);
        os << "edge " << ed.id << " : " << s.vertex_id(ed.v0) << " " << s.vertex_id(ed.v1);
        if (e < static_cast<int>(file.theta_literals.size()) && !file.theta_literals[e].empty())
            os << " theta=" << file.theta_literals[e];
        os << "\n";
    }
    for (int f = 0; f < s.num_faces(); ++f) {
        os << "face " << s.face(f).id << " :";
        for (const auto& u : s.face(f).boundary) os << " " << (u.forward ? "+" : "-") << s.edge(u.edge).id;
        os << "\n";
    }
    return os.str();
}

SurfaceFile make_surface_file(CellularSurface surface, EdgeWeights weights) {
    std::vector<std::string> literals;
    for (double w : weights) literals.push_back(w == 0.0 ? "" : format_roundtrip(w));
    return {std::move(surface), std::move(weights), std::move(literals)};
}

RadiiFile parse_radii(std::istream& in) {
    RadiiFile out;
    bool have_header = false;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto tok = tokenize(raw);
        if (tok.empty()) continue;
        if (!have_header) {
            if (tok.size() != 5 || tok[0] != "radii" || tok[1] != "for" || tok[3] != "residual")
                throw ParseError("expected 'radii for <surface> residual <value>' header", line);
            out.surface_name = tok[2];
            out.residual = parse_real(tok[4], line);
            have_header = true;
            continue;
        }
        if (tok.size() != 3 || tok[0] != "radius") throw ParseError("expected 'radius <vertex-id> <value>'", line);
        const double r = parse_real(tok[2], line);
        if (!(r > 0.0)) throw ParseError("radius must be positive", line);
        out.radii.emplace_back(parse_id(tok[1], line), r);
    }
    if (!have_header) throw ParseError("empty radii file", line);
    return out;
}

RadiiFile load_radii(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IOError("cannot open " + path.string());
    return parse_radii(in);
}

std::string serialize_radii(const RadiiFile& file) {
    auto sorted = file.radii;
    std::sort(sorted.begin(), sorted.end());
    std::ostringstream os;
    os << "radii for " << file.surface_name << " residual " << format_roundtrip(file.residual) << "\n";
    for (const auto& [id, r] : sorted) os << "radius " << id << " " << format_roundtrip(r) << "\n";
    return os.str();
}

std::vector<double> radii_for_surface(const RadiiFile& file, const CellularSurface& s) {
    if (static_cast<int>(file.radii.size()) != s.num_vertices())
        throw ParseError("radii file has " + std::to_string(file.radii.size()) + " entries but surface has " +
                             std::to_string(s.num_vertices()) + " vertices",
                         0);
    std::vector<double> out(s.num_vertices(), 0.0);
    for (const auto& [id, r] : file.radii) {
        const int v = s.vertex_index(id);
        if (v < 0) throw ParseError("radius for unknown vertex " + std::to_string(id), 0);
        if (out[v] != 0.0) throw ParseError("duplicate radius for vertex " + std::to_string(id), 0);
        out[v] = r;
    }
    return out;
}

void check_region_polygon(const std::vector<std::complex<double>>& c) {
    const std::size_t m = c.size();
    if (m < 3) throw ParseError("region needs at least 3 corners", 0);
    double area = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const auto a = c[i];
        const auto b = c[(i + 1) % m];
        area += a.real() * b.imag() - b.real() * a.imag();
    }
    if (!(area > 0.0)) throw ParseError("region polygon must be counterclockwise with positive area", 0);
    auto cross = [](std::complex<double> o, std::complex<double> a, std::complex<double> b) {
        return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
    };
    auto segments_cross = [&](std::complex<double> p1, std::complex<double> p2, std::complex<double> q1,
                              std::complex<double> q2) {
        const double d1 = cross(q1, q2, p1);
        const double d2 = cross(q1, q2, p2);
        const double d3 = cross(p1, p2, q1);
        const double d4 = cross(p1, p2, q2);
        return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
    };
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            if (j == i + 1 || (i == 0 && j == m - 1)) continue;
            if (segments_cross(c[i], c[(i + 1) % m], c[j], c[(j + 1) % m]))
                throw ParseError("region polygon is not simple", 0);
        }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (c[i] == c[j]) throw ParseError("region polygon repeats a corner", 0);
}

RegionFile parse_region(std::istream& in) {
    RegionFile out;
    bool have_header = false;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto tok = tokenize(raw);
        if (tok.empty()) continue;
        if (!have_header) {
            if (tok.size() != 4 || tok[0] != "region" || tok[1] != "for" || tok[2] != "face")
                throw ParseError("expected 'region for face <id>' header", line);
            out.face_id = parse_id(tok[3], line);
            have_header = true;
            continue;
        }
        if (tok.size() != 3 || tok[0] != "corner") throw ParseError("expected 'corner <x> <y>'", line);
        out.corners.emplace_back(parse_real(tok[1], line), parse_real(tok[2], line));
    }
    if (!have_header) throw ParseError("empty region file", line);
    check_region_polygon(out.corners);
    return out;
}

RegionFile load_region(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IOError("cannot open " + path.string());
    return parse_region(in);
}

std::string serialize_region(const RegionFile& file) {
    std::ostringstream os;
    os << "region for face " << file.face_id << "\n";
    for (const auto& c : file.corners) os << "corner " << format_roundtrip(c.real()) << " " << format_roundtrip(c.imag()) << "\n";
    return os.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IOError("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw IOError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IOError("cannot rename into " + path.string());
    }
}

}  // namespace circlepat
