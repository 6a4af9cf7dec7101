#include "oblique/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "oblique/bspline.hpp"
#include "oblique/errors.hpp"

namespace oblique::io {

namespace {

nlohmann::json vector_to_json(const Vector& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        arr.push_back({v(i).real(), v(i).imag()});
    return arr;
}

Vector vector_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty())
        throw input_error("frame JSON: vector must be a nonempty array");
    Vector v(j.size());
    Eigen::Index i = 0;
    for (const auto& entry : j) {
        if (entry.is_number()) {
            v(i++) = Complex(entry.get<double>(), 0.0);
        } else if (entry.is_array() && entry.size() == 2) {
            v(i++) = Complex(entry[0].get<double>(), entry[1].get<double>());
        } else {
            throw input_error("frame JSON: entries must be numbers or [re, im] pairs");
        }
    }
    return v;
}

Matrix columns_from_json(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.empty())
        throw input_error(std::string(what) + " must be a nonempty array of vectors");
    std::vector<Vector> cols;
    cols.reserve(j.size());
    for (const auto& entry : j) cols.push_back(vector_from_json(entry));
    const Eigen::Index d = cols.front().size();
    Matrix m(d, static_cast<Eigen::Index>(cols.size()));
    for (size_t k = 0; k < cols.size(); ++k) {
        if (cols[k].size() != d)
            throw input_error(std::string(what) + ": vectors must share one dimension");
        m.col(static_cast<Eigen::Index>(k)) = cols[k];
    }
    return m;
}

} // namespace

nlohmann::json frame_to_json(const FiniteFrame& frame,
                             const std::optional<Subspace>& subspace) {
    nlohmann::json j;
    j["dim"] = frame.dim();
    nlohmann::json vectors = nlohmann::json::array();
    for (int k = 0; k < frame.size(); ++k)
        vectors.push_back(vector_to_json(frame.synthesis().col(k)));
    j["vectors"] = std::move(vectors);
    if (subspace) {
        nlohmann::json basis = nlohmann::json::array();
        for (int k = 0; k < subspace->dim(); ++k)
            basis.push_back(vector_to_json(subspace->basis().col(k)));
        j["subspace"] = std::move(basis);
    }
    return j;
}

FrameRecord frame_from_json(const nlohmann::json& j) {
    if (!j.contains("vectors"))
        throw input_error("frame JSON: missing \"vectors\"");
    Matrix t = columns_from_json(j["vectors"], "frame JSON vectors");
    if (j.contains("dim") && j["dim"].get<Eigen::Index>() != t.rows())
        throw input_error("frame JSON: declared dim disagrees with vectors");
    FrameRecord rec{FiniteFrame(std::move(t)), std::nullopt};
    if (j.contains("subspace"))
        rec.subspace = Subspace(columns_from_json(j["subspace"], "frame JSON subspace"));
    return rec;
}

FramePairRecord frame_pair_from_json(const nlohmann::json& j) {
    if (!j.contains("F") || !j.contains("G"))
        throw input_error("frame pair JSON: needs \"F\" and \"G\"");
    return {frame_from_json(j["F"]), frame_from_json(j["G"])};
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", x);
    return buf;
}

std::string periodic_to_csv(const si::PeriodicFunction& p) {
    std::string out = "gamma,re,im\n";
    for (int j = 0; j < p.size(); ++j) {
        out += format_double(p.gamma(j));
        out += ',';
        out += format_double(p.samples(j).real());
        out += ',';
        out += format_double(p.samples(j).imag());
        out += '\n';
    }
    return out;
}

si::PeriodicFunction periodic_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<Complex> samples;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("gamma", 0) == 0) continue;
        }
        double gamma, re, im;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &gamma, &re, &im) != 3)
            throw input_error("periodic CSV: malformed line: " + line);
        samples.emplace_back(re, im);
    }
    const size_t n = samples.size();
    if (n < 4 || (n & (n - 1)) != 0)
        throw input_error("periodic CSV: sample count must be a power of two >= 4");
    si::PeriodicFunction p{Vector(static_cast<Eigen::Index>(n)), 0};
    while ((1u << p.grid_log2) < n) ++p.grid_log2;
    for (size_t j = 0; j < n; ++j) p.samples(static_cast<Eigen::Index>(j)) = samples[j];
    return p;
}

nlohmann::json periodic_to_json(const si::PeriodicFunction& p) {
    nlohmann::json j;
    j["grid_log2"] = p.grid_log2;
    nlohmann::json samples = nlohmann::json::array();
    for (int i = 0; i < p.size(); ++i)
        samples.push_back({p.samples(i).real(), p.samples(i).imag()});
    j["samples"] = std::move(samples);
    return j;
}

namespace {

/// Tabulated Fourier data: sorted (xi, value) with linear interpolation,
/// zero outside the tabulated range.
struct TabulatedFt {
    std::vector<double> xi;
    std::vector<Complex> value;

    Complex operator()(double x) const {
        if (x <= xi.front() || x >= xi.back()) return {0.0, 0.0};
        const auto it = std::upper_bound(xi.begin(), xi.end(), x);
        const size_t hi = static_cast<size_t>(it - xi.begin());
        const double t = (x - xi[hi - 1]) / (xi[hi] - xi[hi - 1]);
        return (1.0 - t) * value[hi - 1] + t * value[hi];
    }
};

} // namespace

si::GeneratorSpec parse_generator(const std::string& spec) {
    if (spec.rfind("bspline:", 0) == 0) {
        int order = 0;
        try {
            order = std::stoi(spec.substr(8));
        } catch (const std::exception&) {
            throw input_error("generator spec: bad B-spline order in \"" + spec + "\"");
        }
        return bspline::bspline_ft(order);
    }
    if (spec.rfind("csv:", 0) == 0) {
        const size_t colon = spec.rfind(':');
        if (colon == 3)
            throw input_error("generator spec: expected csv:PATH:DECAY_EXPONENT");
        const std::string path = spec.substr(4, colon - 4);
        double exponent = 0.0;
        try {
            exponent = std::stod(spec.substr(colon + 1));
        } catch (const std::exception&) {
            throw input_error("generator spec: bad decay exponent in \"" + spec + "\"");
        }
        if (exponent <= 1.0)
            throw input_error("generator spec: decay exponent must exceed 1");

        TabulatedFt table;
        std::istringstream in(read_file(path));
        std::string line;
        bool first = true;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            if (first) {
                first = false;
                if (line.rfind("xi", 0) == 0) continue;
            }
            double x, re, im;
            if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &re, &im) != 3)
                throw input_error("generator CSV: malformed line: " + line);
            table.xi.push_back(x);
            table.value.emplace_back(re, im);
        }
        if (table.xi.size() < 2)
            throw input_error("generator CSV: need at least two rows");
        if (!std::is_sorted(table.xi.begin(), table.xi.end()))
            throw input_error("generator CSV: xi column must be strictly increasing");
        const double radius =
            std::max(std::abs(table.xi.front()), std::abs(table.xi.back()));
        // the interpolant vanishes outside the tabulated range, so the tail
        // bound is the compact-support one; the declared exponent only
        // documents the data
        return si::GeneratorSpec::plain(std::move(table),
                                        si::DecayBound{0.0, exponent, radius});
    }
    throw input_error("generator spec: expected bspline:m or csv:PATH:DECAY_EXPONENT");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot open file for writing: " + path);
    out << content;
    if (!out.good()) throw input_error("failed writing file: " + path);
}

} // namespace oblique::io
