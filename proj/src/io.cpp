#include "leapclust/io.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace leapclust {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw InputError("failed writing " + path.string());
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_cells(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

std::optional<double> parse_number(std::string_view cell) {
    if (cell.empty()) return std::nullopt;
    if (cell.front() == '+') cell.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) return std::nullopt;
    return v;
}

struct Line {
    std::size_t number;
    std::string_view text;
};

// Non-empty lines that are not '#' comments.
std::vector<Line> data_lines(const std::string& text) {
    std::vector<Line> lines;
    std::size_t start = 0, number = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        ++number;
        const std::string_view line = trim(std::string_view(text).substr(start, end - start));
        if (!line.empty() && line.front() != '#') lines.push_back({number, line});
        start = end + 1;
    }
    return lines;
}

std::vector<std::vector<double>> numeric_rows(const std::vector<Line>& lines, std::size_t first) {
    std::vector<std::vector<double>> rows;
    std::size_t width = 0;
    for (std::size_t k = first; k < lines.size(); ++k) {
        const auto cells = split_cells(lines[k].text);
        if (rows.empty()) width = cells.size();
        else if (cells.size() != width)
            throw ParseError("expected " + std::to_string(width) + " columns, found " + std::to_string(cells.size()),
                             lines[k].number);
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto cell : cells) {
            const auto v = parse_number(cell);
            if (!v) throw ParseError("non-numeric cell '" + std::string(cell) + "'", lines[k].number);
            row.push_back(*v);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string matrix_csv(const Matrix& m) {
    std::string out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out += ',';
            out += format_double(m(i, j));
        }
        out += '\n';
    }
    return out;
}

constexpr char kMagic[4] = {'L', 'F', 'D', '1'};

template <class T>
void put_le(std::string& out, T value) {
    auto bits = std::bit_cast<std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>>(value);
    for (std::size_t b = 0; b < sizeof(T); ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
}

std::uint64_t get_le64(const std::string& in, std::size_t offset) {
    std::uint64_t bits = 0;
    for (std::size_t b = 0; b < 8; ++b)
        bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[offset + b])) << (8 * b);
    return bits;
}

}  // namespace

void write_distances_csv(const fs::path& path, const DistanceMatrix& d) { write_text(path, matrix_csv(d.matrix())); }

DistanceMatrix read_distances_csv(const fs::path& path) {
    const auto rows = numeric_rows(data_lines(read_text(path)), 0);
    if (rows.empty()) throw InputError(path.string() + ": empty distance matrix");
    if (rows.size() != rows.front().size())
        throw InputError(path.string() + ": distance matrix is " + std::to_string(rows.size()) + " x " +
                         std::to_string(rows.front().size()));
    const auto n = static_cast<Eigen::Index>(rows.size());
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return DistanceMatrix(std::move(m));
}

void write_distances_binary(const fs::path& path, const DistanceMatrix& d) {
    const auto n = static_cast<std::uint64_t>(d.size());
    std::string out(kMagic, 4);
    out.reserve(12 + 8 * n * n);
    put_le(out, n);
    for (std::uint64_t i = 0; i < n; ++i)
        for (std::uint64_t j = 0; j < n; ++j) put_le(out, d(i, j));
    write_text(path, out);
}

DistanceMatrix read_distances_binary(const fs::path& path) {
    const std::string in = read_text(path);
    if (in.size() < 12 || std::memcmp(in.data(), kMagic, 4) != 0) throw InputError(path.string() + ": not an LFD1 file");
    const std::uint64_t n = get_le64(in, 4);
    if (n == 0 || n > (1u << 20) || in.size() != 12 + 8 * n * n)
        throw InputError(path.string() + ": LFD1 size does not match n = " + std::to_string(n));
    const auto m = static_cast<Eigen::Index>(n);
    Matrix values(m, m);
    std::size_t offset = 12;
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j, offset += 8) values(i, j) = std::bit_cast<double>(get_le64(in, offset));
    return DistanceMatrix(std::move(values));
}

DistanceMatrix read_distances(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    char head[4] = {};
    in.read(head, 4);
    if (in.gcount() == 4 && std::memcmp(head, kMagic, 4) == 0) return read_distances_binary(path);
    return read_distances_csv(path);
}

void write_embedding_csv(const fs::path& path, const Embedding& e) {
    std::string out = "# L=" + std::to_string(e.dim()) + " n=" + std::to_string(e.size()) + "\n";
    out += matrix_csv(e.coords.transpose());
    write_text(path, out);
}

Embedding read_embedding_csv(const fs::path& path) {
    const std::string text = read_text(path);
    std::size_t dim = 0, n = 0;
    if (std::sscanf(text.c_str(), "# L=%zu n=%zu", &dim, &n) != 2)
        throw ParseError(path.string() + ": missing '# L=<L> n=<n>' header", 1);
    const auto rows = numeric_rows(data_lines(text), 0);
    if (rows.size() != n) throw InputError(path.string() + ": header says n=" + std::to_string(n) + ", found " + std::to_string(rows.size()) + " rows");
    Embedding e;
    e.coords.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != dim) throw InputError(path.string() + ": header says L=" + std::to_string(dim));
        for (std::size_t l = 0; l < dim; ++l)
            e.coords(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(i)) = rows[i][l];
    }
    return e;
}

void write_labels_csv(const fs::path& path, const ClusterAssignment& labels) {
    std::string out;
    for (int l : labels.labels) out += std::to_string(l) + '\n';
    write_text(path, out);
}

ClusterAssignment read_labels_csv(const fs::path& path) {
    const std::string text = read_text(path);
    const auto lines = data_lines(text);
    std::vector<int> raw;
    for (std::size_t k = 0; k < lines.size(); ++k) {
        const std::string_view cell = lines[k].text;
        int v = 0;
        const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec != std::errc() || ptr != cell.data() + cell.size()) {
            if (k == 0 && cell == "label") continue;
            throw ParseError("bad label '" + std::string(cell) + "'", lines[k].number);
        }
        raw.push_back(v);
    }
    if (raw.empty()) throw InputError(path.string() + ": no labels");
    return ClusterAssignment::from_labels(raw);
}

void write_dataset_csv(const fs::path& path, const LabeledDataset& ds) {
    const RowMatrix& a = ds.points.matrix();
    std::string out;
    for (Eigen::Index j = 0; j < a.cols(); ++j) out += "x" + std::to_string(j) + ",";
    out += "label\n";
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) out += format_double(a(i, j)) + ",";
        out += std::to_string(ds.truth.labels[static_cast<std::size_t>(i)]) + "\n";
    }
    write_text(path, out);
    nlohmann::ordered_json manifest;
    manifest["generator"] = ds.generator_name;
    manifest["seed"] = ds.seed;
    manifest["n"] = ds.points.size();
    manifest["dim"] = ds.points.dim();
    manifest["clusters"] = ds.truth.num_clusters;
    manifest["data"] = path.filename().string();
    fs::path mpath = path;
    mpath.replace_extension(".json");
    write_text(mpath, manifest.dump(2) + "\n");
}

IngestedData ingest_csv_text(const std::string& text) {
    const auto lines = data_lines(text);
    if (lines.empty()) throw InputError("no data rows");
    std::size_t first = 0;
    std::optional<std::size_t> label_col;
    const auto head = split_cells(lines[0].text);
    bool header = false;
    for (const auto cell : head) header = header || !parse_number(cell);
    if (header) {
        first = 1;
        for (std::size_t c = 0; c < head.size(); ++c)
            if (head[c] == "label") label_col = c;
        if (lines.size() < 2) throw InputError("header without data rows");
    }
    auto rows = numeric_rows(lines, first);
    if (header && rows.front().size() != head.size())
        throw ParseError("expected " + std::to_string(head.size()) + " columns, found " + std::to_string(rows.front().size()),
                         lines[1].number);
    IngestedData out;
    if (label_col) {
        std::vector<int> raw;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const double v = rows[r][*label_col];
            if (v != std::floor(v)) throw ParseError("label must be an integer", lines[first + r].number);
            raw.push_back(static_cast<int>(v));
            rows[r].erase(rows[r].begin() + static_cast<std::ptrdiff_t>(*label_col));
        }
        if (rows.front().empty()) throw InputError("no coordinate columns besides label");
        out.truth = ClusterAssignment::from_labels(raw);
    }
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (double v : rows[r])
            if (!std::isfinite(v)) throw ParseError("non-finite value", lines[first + r].number);
    out.points = PointSet::from_rows(rows);
    return out;
}

IngestedData ingest_csv(const fs::path& path) {
    try {
        return ingest_csv_text(read_text(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.line());
    }
}

std::string son_solution_json(const SonSolution& sol, const ClusterAssignment& labels) {
    nlohmann::ordered_json j;
    j["lambda"] = sol.lambda;
    j["iterations"] = sol.iterations;
    j["converged"] = sol.converged;
    j["objective"] = sol.objective;
    j["residuals"] = {{"primal", sol.primal_residual}, {"dual", sol.dual_residual}};
    auto centroids = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < sol.centroids.rows(); ++i) {
        auto row = nlohmann::ordered_json::array();
        for (Eigen::Index c = 0; c < sol.centroids.cols(); ++c) row.push_back(sol.centroids(i, c));
        centroids.push_back(std::move(row));
    }
    j["centroids"] = std::move(centroids);
    j["labels"] = labels.labels;
    return j.dump(2) + "\n";
}

}  // namespace leapclust
