#include "hbeta/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "hbeta/errors.hpp"

namespace hbeta::io {

namespace {

[[noreturn]] void data_error(const fs::path& path, std::size_t line, const std::string& what) {
    throw DataError(path.string() + ":" + std::to_string(line) + ": " + what);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view text, double& out) {
    text = trim(text);
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::ifstream open_input(const fs::path& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    return in;
}

// Rows of numeric cells; a first line with any non-numeric cell is a header.
std::vector<std::vector<double>> read_rows(const fs::path& path) {
    auto in = open_input(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto cells = split(body);
        std::vector<double> row(cells.size());
        bool ok = true;
        std::size_t bad = 0;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (!parse_double(cells[c], row[c]) || !std::isfinite(row[c])) {
                ok = false;
                bad = c;
                break;
            }
        }
        if (!ok) {
            if (rows.empty() && lineno == 1) continue;
            data_error(path, lineno, "column " + std::to_string(bad + 1) + ": cannot parse '" +
                                         std::string(trim(cells[bad])) + "' as a finite number");
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            data_error(path, lineno, "expected " + std::to_string(rows.front().size()) + " columns, found " +
                                         std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError("'" + path.string() + "' contains no data rows");
    return rows;
}

constexpr char kDrawMagic[4] = {'H', 'B', 'D', '1'};
constexpr char kDesignMagic[4] = {'H', 'B', 'X', '1'};

template <class T>
T to_little(T v) {
    if constexpr (std::endian::native == std::endian::big) {
        auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
        std::reverse(bytes.begin(), bytes.end());
        return std::bit_cast<T>(bytes);
    }
    return v;
}

class Writer {
public:
    template <class T>
    void put(T v) {
        v = to_little(v);
        const auto* p = reinterpret_cast<const char*>(&v);
        buf_.append(p, sizeof(T));
    }
    void put_doubles(std::span<const double> v) {
        for (double d : v) put(d);
    }
    void put_bytes(std::string_view s) { buf_.append(s); }
    std::string take() { return std::move(buf_); }

private:
    std::string buf_;
};

class Reader {
public:
    Reader(const std::string& bytes, std::string origin) : bytes_(bytes), origin_(std::move(origin)) {}

    template <class T>
    T get(const char* what) {
        need(sizeof(T), what);
        T v;
        std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return to_little(v);
    }
    void get_doubles(std::vector<double>& out, std::size_t n, const char* what) {
        need(n * sizeof(double), what);
        out.resize(n);
        for (auto& d : out) d = get<double>(what);
    }
    std::string get_bytes(std::size_t n, const char* what) {
        need(n, what);
        std::string s = bytes_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    bool done() const { return pos_ == bytes_.size(); }
    const std::string& origin() const { return origin_; }

private:
    void need(std::size_t n, const char* what) const {
        if (bytes_.size() - pos_ < n) throw DataError(origin_ + ": truncated file while reading " + what);
    }
    const std::string& bytes_;
    std::string origin_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<double> read_column_csv(const fs::path& path) {
    const auto rows = read_rows(path);
    if (rows.front().size() != 1) {
        throw DataError(path.string() + ": expected a single column, found " + std::to_string(rows.front().size()));
    }
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[0]);
    return out;
}

std::vector<std::uint64_t> read_counts_csv(const fs::path& path) {
    auto in = open_input(path);
    std::vector<std::uint64_t> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
        if (ec != std::errc{} || ptr != body.data() + body.size()) {
            if (out.empty() && lineno == 1) continue;
            data_error(path, lineno, "expected a nonnegative integer count, found '" + std::string(body) + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) throw DataError("'" + path.string() + "' contains no counts");
    return out;
}

logistic::DesignMatrix read_matrix_csv(const fs::path& path) {
    const auto rows = read_rows(path);
    const std::size_t n = rows.size();
    const std::size_t m = rows.front().size();
    std::vector<double> data(n * m);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < m; ++c) data[c * n + r] = rows[r][c];
    }
    return {n, m, std::move(data)};
}

logistic::DesignMatrix read_matrix_bin(const fs::path& path) {
    const std::string bytes = read_file(path);
    Reader in(bytes, path.string());
    if (in.get_bytes(4, "magic") != std::string(kDesignMagic, 4)) throw DataError(path.string() + ": not a design file");
    in.get<std::uint32_t>("flags");
    const auto n = in.get<std::uint32_t>("row count");
    const auto m = in.get<std::uint32_t>("column count");
    std::vector<double> data;
    in.get_doubles(data, std::size_t(n) * m, "matrix payload");
    if (!in.done()) throw DataError(path.string() + ": trailing bytes after matrix payload");
    try {
        return {n, m, std::move(data)};
    } catch (const InvalidArgument& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_matrix_bin(const fs::path& path, const logistic::DesignMatrix& x) {
    Writer w;
    w.put_bytes(std::string_view(kDesignMagic, 4));
    w.put<std::uint32_t>(0);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(x.rows()));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(x.cols()));
    w.put_doubles(x.data());
    write_file_atomic(path, w.take());
}

logistic::DesignMatrix read_design(const fs::path& path) {
    auto in = open_input(path, std::ios::binary);
    char head[4] = {};
    in.read(head, 4);
    if (in.gcount() == 4 && std::memcmp(head, kDesignMagic, 4) == 0) return read_matrix_bin(path);
    return read_matrix_csv(path);
}

void Table::add(std::string name, std::vector<double> values) {
    if (!columns.empty() && values.size() != columns.front().size()) {
        throw InvalidArgument("column '" + name + "' has a different length");
    }
    header.push_back(std::move(name));
    columns.push_back(std::move(values));
}

std::string format_number(double v) {
    if (std::isnan(v)) return "NA";
    if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string to_csv(const Table& table) {
    std::string out;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (c) out += ',';
        out += table.header[c];
    }
    out += '\n';
    for (std::size_t r = 0; r < table.rows(); ++r) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (c) out += ',';
            out += format_number(table.columns[c][r]);
        }
        out += '\n';
    }
    return out;
}

void write_csv(const fs::path& path, const Table& table) { write_file_atomic(path, to_csv(table)); }

void write_file_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write '" + tmp.string() + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw DataError("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
    auto in = open_input(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string serialize_draws(const PosteriorDraws& draws) {
    const std::size_t intervals = draws.grid.intervals();
    const std::size_t dim = draws.theta_draws.empty() ? 0 : draws.theta_draws.front().size();
    Writer w;
    w.put_bytes(std::string_view(kDrawMagic, 4));
    w.put<std::uint32_t>(static_cast<std::uint32_t>(draws.grid.levels()));
    w.put<std::uint64_t>(draws.config.iterations);
    w.put<std::uint64_t>(draws.config.burn_in);
    w.put<std::uint64_t>(draws.config.chains);
    w.put<std::uint64_t>(draws.config.seed);
    w.put<std::uint8_t>(draws.config.mode == ThetaSampling::ExactInterval ? 1 : 0);
    w.put<std::uint8_t>(draws.config.record_theta ? 1 : 0);
    w.put<std::uint16_t>(0);
    w.put<std::uint64_t>(draws.pi_draws.size());
    w.put<std::uint64_t>(draws.theta_draws.size());
    w.put<std::uint64_t>(dim);
    w.put<std::uint32_t>(static_cast<std::uint32_t>(draws.likelihood.size()));
    w.put_bytes(draws.likelihood);
    w.put_doubles(draws.grid.endpoints());
    for (const auto& pi : draws.pi_draws) {
        if (pi.size() != intervals) throw InvalidArgument("draw depth differs from the grid");
        w.put_doubles(pi.values());
    }
    for (const auto& t : draws.theta_draws) {
        if (t.size() != dim) throw InvalidArgument("theta draws have unequal lengths");
        w.put_doubles(t);
    }
    return w.take();
}

PosteriorDraws deserialize_draws(const std::string& bytes, const std::string& origin) {
    Reader in(bytes, origin);
    if (bytes.size() < 4 || in.get_bytes(4, "magic") != std::string(kDrawMagic, 4)) {
        throw DataError(origin + ": not a draws file (bad magic)");
    }
    const auto levels = in.get<std::uint32_t>("levels");
    if (levels < 1 || levels > static_cast<std::uint32_t>(kMaxLevels)) throw DataError(origin + ": bad level count");
    ChainConfig cfg;
    cfg.iterations = in.get<std::uint64_t>("iterations");
    cfg.burn_in = in.get<std::uint64_t>("burn-in");
    cfg.chains = in.get<std::uint64_t>("chains");
    cfg.seed = in.get<std::uint64_t>("seed");
    cfg.mode = in.get<std::uint8_t>("mode") ? ThetaSampling::ExactInterval : ThetaSampling::MidpointGrid;
    cfg.record_theta = in.get<std::uint8_t>("flags") != 0;
    in.get<std::uint16_t>("padding");
    const auto n_pi = in.get<std::uint64_t>("draw count");
    const auto n_theta = in.get<std::uint64_t>("theta draw count");
    const auto dim = in.get<std::uint64_t>("theta length");
    const auto lik_len = in.get<std::uint32_t>("likelihood tag length");
    std::string lik = in.get_bytes(lik_len, "likelihood tag");
    const std::size_t intervals = std::size_t{1} << levels;
    std::vector<double> ends;
    in.get_doubles(ends, intervals + 1, "grid endpoints");

    std::optional<Grid> grid;
    try {
        grid.emplace(std::move(ends));
    } catch (const InvalidArgument& e) {
        throw DataError(origin + ": " + e.what());
    }
    PosteriorDraws d{*grid, cfg, std::move(lik), {}, {}};
    d.pi_draws.reserve(n_pi);
    std::vector<double> buf;
    for (std::uint64_t g = 0; g < n_pi; ++g) {
        in.get_doubles(buf, intervals, "pi draws");
        try {
            d.pi_draws.emplace_back(buf);
        } catch (const InvalidArgument& e) {
            throw DataError(origin + ": draw " + std::to_string(g) + ": " + e.what());
        }
    }
    d.theta_draws.reserve(n_theta);
    for (std::uint64_t g = 0; g < n_theta; ++g) {
        in.get_doubles(buf, dim, "theta draws");
        d.theta_draws.push_back(buf);
    }
    if (!in.done()) throw DataError(origin + ": trailing bytes after payload");
    return d;
}

void save_draws(const fs::path& path, const PosteriorDraws& draws) { write_file_atomic(path, serialize_draws(draws)); }

PosteriorDraws load_draws(const fs::path& path) { return deserialize_draws(read_file(path), path.string()); }

}  // namespace hbeta::io
