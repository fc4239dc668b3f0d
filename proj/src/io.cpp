#include "metaplectic/io.hpp"

#include <json.hpp>

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace metaplectic::io {

namespace {

static_assert(std::endian::native == std::endian::little,
              "binary snapshot format assumes a little-endian host");

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = {}) {
    std::ofstream out(path, mode | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open for writing: " + path.string());
    }
    return out;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = {}) {
    std::ifstream in(path, mode);
    if (!in) {
        throw IoError("cannot open for reading: " + path.string());
    }
    return in;
}

std::vector<double> parse_csv_line(const std::string& line, const std::string& where) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            row.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw IoError("bad numeric cell '" + cell + "' in " + where);
        }
    }
    return row;
}

void check_uniform(double actual, double expected, const std::string& where) {
    if (std::abs(actual - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
        throw IoError("non-uniform grid coordinates in " + where);
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_matrix_json(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
    if (m.rows() == 0 || m.rows() != m.cols() || m.rows() % 2 != 0) {
        throw InvalidDimensionError("matrix JSON expects a square even-dimension matrix");
    }
    auto out = open_out(path);
    out << "{\n  \"n\": " << m.rows() / 2 << ",\n  \"rows\": [\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out << "    [";
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            out << format_double(m(i, j)) << (j + 1 < m.cols() ? ", " : "");
        }
        out << "]" << (i + 1 < m.rows() ? "," : "") << "\n";
    }
    out << "  ]\n}\n";
}

Eigen::MatrixXd read_matrix_json(const std::filesystem::path& path) {
    auto in = open_in(path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad JSON in " + path.string() + ": " + e.what());
    }
    if (!doc.contains("rows") || !doc["rows"].is_array() || doc["rows"].empty()) {
        throw IoError("matrix JSON needs a nonempty 'rows' array: " + path.string());
    }
    const auto& rows = doc["rows"];
    const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index c = static_cast<Eigen::Index>(rows[0].size());
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != c) {
            throw IoError("ragged matrix rows in " + path.string());
        }
        for (Eigen::Index j = 0; j < c; ++j) {
            if (!rows[i][j].is_number()) {
                throw IoError("non-numeric matrix entry in " + path.string());
            }
            m(i, j) = rows[i][j].get<double>();
        }
    }
    if (doc.contains("n") && doc["n"].is_number_integer() &&
        doc["n"].get<Eigen::Index>() * 2 != r) {
        throw IoError("matrix JSON 'n' inconsistent with row count: " + path.string());
    }
    return m;
}

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
    auto out = open_out(path);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            out << format_double(m(i, j)) << (j + 1 < m.cols() ? "," : "");
        }
        out << "\n";
    }
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        rows.push_back(parse_csv_line(line, path.string()));
    }
    if (rows.empty()) {
        throw IoError("empty matrix CSV: " + path.string());
    }
    const Eigen::Index c = static_cast<Eigen::Index>(rows[0].size());
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != c) {
            throw IoError("ragged matrix CSV rows in " + path.string());
        }
        for (Eigen::Index j = 0; j < c; ++j) m(static_cast<Eigen::Index>(i), j) = rows[i][j];
    }
    return m;
}

Eigen::MatrixXd read_matrix(const std::filesystem::path& path) {
    if (path.extension() == ".csv") return read_matrix_csv(path);
    return read_matrix_json(path);
}

void write_wavefunction_csv(const std::filesystem::path& path, const SampledWavefunction& psi) {
    auto out = open_out(path);
    if (psi.n() == 1) {
        out << "x,re,im\n";
        const AxisGrid& ax = psi.grid.axes[0];
        for (int j = 0; j < ax.count; ++j) {
            out << format_double(ax.point(j)) << "," << format_double(psi.values[j].real()) << ","
                << format_double(psi.values[j].imag()) << "\n";
        }
    } else {
        out << "x1,x2,re,im\n";
        const AxisGrid& ax0 = psi.grid.axes[0];
        const AxisGrid& ax1 = psi.grid.axes[1];
        for (int j0 = 0; j0 < ax0.count; ++j0) {
            for (int j1 = 0; j1 < ax1.count; ++j1) {
                const Complex v = psi.values[static_cast<Eigen::Index>(j0) * ax1.count + j1];
                out << format_double(ax0.point(j0)) << "," << format_double(ax1.point(j1)) << ","
                    << format_double(v.real()) << "," << format_double(v.imag()) << "\n";
            }
        }
    }
}

SampledWavefunction read_wavefunction_csv(const std::filesystem::path& path, double hbar) {
    auto in = open_in(path);
    std::string header;
    if (!std::getline(in, header)) {
        throw IoError("empty wavefunction CSV: " + path.string());
    }
    int n = 0;
    if (header == "x,re,im") {
        n = 1;
    } else if (header == "x1,x2,re,im") {
        n = 2;
    } else {
        throw IoError("unrecognized wavefunction CSV header '" + header + "'");
    }

    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto row = parse_csv_line(line, path.string());
        if (static_cast<int>(row.size()) != n + 2) {
            throw IoError("wrong column count in " + path.string());
        }
        rows.push_back(std::move(row));
    }
    if (rows.size() < 8) {
        throw IoError("too few samples in " + path.string());
    }

    Eigen::VectorXcd values(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        values[static_cast<Eigen::Index>(i)] = Complex(rows[i][n], rows[i][n + 1]);
    }

    if (n == 1) {
        const int count = static_cast<int>(rows.size());
        const double x0 = rows.front()[0];
        const double dx = (rows.back()[0] - x0) / (count - 1);
        for (int j = 0; j < count; ++j) check_uniform(rows[j][0], x0 + j * dx, path.string());
        return SampledWavefunction(Grid{{AxisGrid{x0, dx, count}}}, std::move(values), hbar);
    }

    // Axis 0 is slowest: the x2 column cycles fastest.
    std::size_t n1 = 1;
    while (n1 < rows.size() && rows[n1][0] == rows[0][0]) ++n1;
    if (n1 < 8 || rows.size() % n1 != 0) {
        throw IoError("inconsistent 2-D lattice in " + path.string());
    }
    const std::size_t n0 = rows.size() / n1;
    const double x0_0 = rows.front()[0];
    const double x0_1 = rows.front()[1];
    const double dx0 = (rows.back()[0] - x0_0) / (static_cast<double>(n0) - 1);
    const double dx1 = (rows[n1 - 1][1] - x0_1) / (static_cast<double>(n1) - 1);
    for (std::size_t j0 = 0; j0 < n0; ++j0) {
        for (std::size_t j1 = 0; j1 < n1; ++j1) {
            const auto& row = rows[j0 * n1 + j1];
            check_uniform(row[0], x0_0 + static_cast<double>(j0) * dx0, path.string());
            check_uniform(row[1], x0_1 + static_cast<double>(j1) * dx1, path.string());
        }
    }
    Grid grid{{AxisGrid{x0_0, dx0, static_cast<int>(n0)}, AxisGrid{x0_1, dx1, static_cast<int>(n1)}}};
    return SampledWavefunction(std::move(grid), std::move(values), hbar);
}

void write_wavefunction_binary(const std::filesystem::path& path,
                               const SampledWavefunction& psi) {
    auto out = open_out(path, std::ios::binary);
    const std::uint32_t n = static_cast<std::uint32_t>(psi.n());
    out.write(reinterpret_cast<const char*>(&n), sizeof(n));
    for (const auto& axis : psi.grid.axes) {
        const std::uint32_t count = static_cast<std::uint32_t>(axis.count);
        out.write(reinterpret_cast<const char*>(&count), sizeof(count));
    }
    for (const auto& axis : psi.grid.axes) {
        out.write(reinterpret_cast<const char*>(&axis.x0), sizeof(double));
        out.write(reinterpret_cast<const char*>(&axis.dx), sizeof(double));
    }
    out.write(reinterpret_cast<const char*>(&psi.hbar), sizeof(double));
    for (Eigen::Index i = 0; i < psi.values.size(); ++i) {
        const double re = psi.values[i].real();
        const double im = psi.values[i].imag();
        out.write(reinterpret_cast<const char*>(&re), sizeof(double));
        out.write(reinterpret_cast<const char*>(&im), sizeof(double));
    }
    if (!out) {
        throw IoError("write failed: " + path.string());
    }
}

SampledWavefunction read_wavefunction_binary(const std::filesystem::path& path) {
    auto in = open_in(path, std::ios::binary);
    auto read_u32 = [&in, &path]() {
        std::uint32_t v = 0;
        in.read(reinterpret_cast<char*>(&v), sizeof(v));
        if (!in) throw IoError("truncated binary snapshot: " + path.string());
        return v;
    };
    auto read_f64 = [&in, &path]() {
        double v = 0;
        in.read(reinterpret_cast<char*>(&v), sizeof(v));
        if (!in) throw IoError("truncated binary snapshot: " + path.string());
        return v;
    };

    const std::uint32_t n = read_u32();
    if (n < 1 || n > 2) {
        throw IoError("unsupported dimension in binary snapshot: " + path.string());
    }
    std::vector<std::uint32_t> counts(n);
    for (auto& c : counts) c = read_u32();
    Grid grid;
    for (std::uint32_t a = 0; a < n; ++a) {
        AxisGrid axis;
        axis.x0 = read_f64();
        axis.dx = read_f64();
        axis.count = static_cast<int>(counts[a]);
        grid.axes.push_back(axis);
    }
    const double hbar = read_f64();

    Eigen::VectorXcd values(grid.size());
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        const double re = read_f64();
        const double im = read_f64();
        values[i] = Complex(re, im);
    }
    return SampledWavefunction(std::move(grid), std::move(values), hbar);
}

void write_profile_csv(const std::filesystem::path& path, const SampledWavefunction& psi) {
    auto out = open_out(path);
    if (psi.n() == 1) {
        out << "x,re,im,abs2\n";
        const AxisGrid& ax = psi.grid.axes[0];
        for (int j = 0; j < ax.count; ++j) {
            const Complex v = psi.values[j];
            out << format_double(ax.point(j)) << "," << format_double(v.real()) << ","
                << format_double(v.imag()) << "," << format_double(std::norm(v)) << "\n";
        }
    } else {
        out << "x1,x2,re,im,abs2\n";
        const AxisGrid& ax0 = psi.grid.axes[0];
        const AxisGrid& ax1 = psi.grid.axes[1];
        for (int j0 = 0; j0 < ax0.count; ++j0) {
            for (int j1 = 0; j1 < ax1.count; ++j1) {
                const Complex v = psi.values[static_cast<Eigen::Index>(j0) * ax1.count + j1];
                out << format_double(ax0.point(j0)) << "," << format_double(ax1.point(j1)) << ","
                    << format_double(v.real()) << "," << format_double(v.imag()) << ","
                    << format_double(std::norm(v)) << "\n";
            }
        }
    }
}

void write_report_csv(const std::filesystem::path& path, const NormEstimateReport& report) {
    auto out = open_out(path);
    out << "index,label,ratio\n";
    for (std::size_t i = 0; i < report.ratios.size(); ++i) {
        out << i << "," << report.family[i] << "," << format_double(report.ratios[i]) << "\n";
    }
}

void write_series_csv(const std::filesystem::path& path, const NormTimeSeries& series) {
    auto out = open_out(path);
    out << "t,norm\n";
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        out << format_double(series.times[i]) << "," << format_double(series.norms[i]) << "\n";
    }
}

void write_comparison_csv(const std::filesystem::path& path, const ComparisonReport& report) {
    auto out = open_out(path);
    out << "t,l2_error,phase\n";
    for (const auto& entry : report.entries) {
        out << format_double(entry.t) << "," << format_double(entry.l2_error) << ","
            << format_double(entry.phase) << "\n";
    }
}

}  // namespace metaplectic::io
