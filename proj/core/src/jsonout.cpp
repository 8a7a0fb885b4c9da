#include "gdsq/jsonout.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gdsq/common.hpp"

namespace gdsq {
namespace {

void append_escaped(std::string& out, const std::string& s) {
    out += '"';
    for (const char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", ch);
                    out += buf;
                } else {
                    out += ch;
                }
        }
    }
    out += '"';
}

void append_double(std::string& out, double v) {
    if (!std::isfinite(v)) fail("refusing to serialize a non-finite number");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

void dump(const Json& j, std::string& out, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    switch (j.type()) {
        case Json::value_t::null: out += "null"; break;
        case Json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
        case Json::value_t::number_integer: out += std::to_string(j.get<std::int64_t>()); break;
        case Json::value_t::number_unsigned: out += std::to_string(j.get<std::uint64_t>()); break;
        case Json::value_t::number_float: append_double(out, j.get<double>()); break;
        case Json::value_t::string: append_escaped(out, j.get<std::string>()); break;
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                break;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                out += pad;
                dump(j[i], out, indent, depth + 1);
                if (i + 1 < j.size()) out += ',';
                out += '\n';
            }
            out += close_pad;
            out += ']';
            break;
        }
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                break;
            }
            out += "{\n";
            std::size_t i = 0;
            for (const auto& [key, value] : j.items()) {
                out += pad;
                append_escaped(out, key);
                out += ": ";
                dump(value, out, indent, depth + 1);
                if (++i < j.size()) out += ',';
                out += '\n';
            }
            out += close_pad;
            out += '}';
            break;
        }
        default: fail("unsupported JSON value type in report output");
    }
}

}  // namespace

std::string dump_deterministic(const Json& j, int indent) {
    std::string out;
    dump(j, out, indent, 0);
    out += '\n';
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) fail("cannot open '", path, "' for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) fail("write to '", path, "' failed");
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail("cannot open '", path, "' for reading");
    std::ostringstream buf;
    buf << f.rdbuf();
    if (!f && !f.eof()) fail("read from '", path, "' failed");
    return buf.str();
}

}  // namespace gdsq
