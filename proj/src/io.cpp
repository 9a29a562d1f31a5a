#include "mimix/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>
#include <system_error>

namespace mimix::io {

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
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

}  // namespace

double parse_double(std::string_view cell) {
    cell = trim(cell);
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
        throw InputError("cannot parse '" + std::string(cell) + "' as a number");
    return v;
}

CsvTable parse_csv(std::string_view text, const std::string& source) {
    CsvTable out;
    std::vector<double> values;
    std::size_t line_no = 0;
    std::size_t rows = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const std::string_view line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split_cells(line);
        if (out.header.empty()) {
            for (auto c : cells) out.header.emplace_back(c);
            continue;
        }
        if (cells.size() != out.header.size()) {
            throw InputError(source + ": row " + std::to_string(rows) + " (line " + std::to_string(line_no) +
                             ") has " + std::to_string(cells.size()) + " cells, header has " +
                             std::to_string(out.header.size()));
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            try {
                values.push_back(parse_double(cells[c]));
            } catch (const InputError& e) {
                throw InputError(source + ": row " + std::to_string(rows) + " (line " + std::to_string(line_no) +
                                 "), column " + std::to_string(c) + ": " + e.what());
            }
        }
        ++rows;
    }
    if (out.header.empty()) throw InputError(source + ": missing header row");
    out.values = Table(rows, out.header.size(), std::move(values));
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CsvTable read_csv(const std::filesystem::path& path) { return parse_csv(read_file(path), path.string()); }

std::string to_csv(const std::vector<std::string>& header, const Table& values) {
    if (header.size() != values.cols()) throw InputError("header width does not match table width");
    std::string out;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c) out += ',';
        out += header[c];
    }
    out += '\n';
    for (std::size_t r = 0; r < values.rows(); ++r) {
        for (std::size_t c = 0; c < values.cols(); ++c) {
            if (c) out += ',';
            out += format_double(values(r, c));
        }
        out += '\n';
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write '" + path.string() + "'");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw InputError("failed writing '" + path.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw InputError("cannot move output into place at '" + path.string() + "'");
    }
}

std::vector<std::size_t> parse_column_spec(const std::string& spec) {
    std::vector<std::size_t> cols;
    std::stringstream ss(spec);
    std::string part;
    auto parse_index = [&](std::string_view s) {
        std::size_t v = 0;
        s = trim(s);
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
            throw ParameterError("bad column spec '" + spec + "'");
        return v;
    };
    while (std::getline(ss, part, ',')) {
        const std::string_view p = trim(part);
        if (p.empty()) continue;
        const std::size_t dash = p.find('-');
        if (dash == std::string_view::npos) {
            cols.push_back(parse_index(p));
            continue;
        }
        const std::size_t lo = parse_index(p.substr(0, dash));
        const std::size_t hi = parse_index(p.substr(dash + 1));
        if (hi < lo) throw ParameterError("bad column range '" + std::string(p) + "'");
        for (std::size_t c = lo; c <= hi; ++c) cols.push_back(c);
    }
    if (cols.empty()) throw ParameterError("empty column spec");
    return cols;
}

std::string format_column_spec(const std::vector<std::size_t>& cols) {
    std::string out;
    for (std::size_t i = 0; i < cols.size();) {
        std::size_t j = i;
        while (j + 1 < cols.size() && cols[j + 1] == cols[j] + 1) ++j;
        if (!out.empty()) out += ',';
        out += std::to_string(cols[i]);
        if (j > i) out += '-' + std::to_string(cols[j]);
        i = j + 1;
    }
    return out;
}

std::string file_digest(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1) {
        throw InvariantError("sha256 digest failed");
    }
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return "sha256:" + hex.str();
}

}  // namespace mimix::io
