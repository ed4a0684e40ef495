#include "hyperkappa/report.hpp"

#include <cmath>
#include <cstdio>

namespace hyperkappa {

std::string format_double(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
    if (v == 0.0) return "0";  // flush the sign of -0.0
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Json Json::boolean(bool v) { Json j; j.kind_ = Kind::boolean; j.bool_ = v; return j; }
Json Json::integer(long long v) { Json j; j.kind_ = Kind::integer; j.int_ = v; return j; }
Json Json::real(double v) { Json j; j.kind_ = Kind::real; j.real_ = v; return j; }
Json Json::text(std::string v) { Json j; j.kind_ = Kind::text; j.text_ = std::move(v); return j; }
Json Json::array() { Json j; j.kind_ = Kind::array; return j; }
Json Json::object() { Json j; j.kind_ = Kind::object; return j; }

Json& Json::push(Json v) {
    items_.push_back(std::move(v));
    return *this;
}

Json& Json::set(const std::string& key, Json v) {
    fields_.emplace_back(key, std::move(v));
    return *this;
}

Json Json::complex_pair(const Complex& z) {
    Json j = array();
    j.push(real(z.real()));
    j.push(real(z.imag()));
    return j;
}

Json Json::complex_matrix(const CMatrix& m) {
    Json rows = array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push(complex_pair(m(r, c)));
        rows.push(std::move(row));
    }
    return rows;
}

Json Json::complex_list(const std::vector<Complex>& v) {
    Json list = array();
    for (const Complex& z : v) list.push(complex_pair(z));
    return list;
}

Json Json::int_matrix(const IMatrix& m) {
    Json rows = array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push(integer(m(r, c)));
        rows.push(std::move(row));
    }
    return rows;
}

namespace {

void write_escaped(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

}  // namespace

void Json::write(std::string& out, int indent, int depth) const {
    const std::string pad(static_cast<size_t>(indent) * (depth + 1), ' ');
    const std::string pad_close(static_cast<size_t>(indent) * depth, ' ');
    switch (kind_) {
        case Kind::null: out += "null"; break;
        case Kind::boolean: out += bool_ ? "true" : "false"; break;
        case Kind::integer: out += std::to_string(int_); break;
        case Kind::real: out += format_double(real_); break;
        case Kind::text: write_escaped(out, text_); break;
        case Kind::array: {
            if (items_.empty()) { out += "[]"; break; }
            // Arrays of scalars print inline; nested structures break lines.
            bool nested = false;
            for (const auto& it : items_)
                if (it.kind_ == Kind::array || it.kind_ == Kind::object) nested = true;
            if (!nested) {
                out += '[';
                for (size_t i = 0; i < items_.size(); ++i) {
                    if (i) out += ", ";
                    items_[i].write(out, indent, depth + 1);
                }
                out += ']';
                break;
            }
            out += "[\n";
            for (size_t i = 0; i < items_.size(); ++i) {
                out += pad;
                items_[i].write(out, indent, depth + 1);
                if (i + 1 < items_.size()) out += ',';
                out += '\n';
            }
            out += pad_close + ']';
            break;
        }
        case Kind::object: {
            if (fields_.empty()) { out += "{}"; break; }
            out += "{\n";
            for (size_t i = 0; i < fields_.size(); ++i) {
                out += pad;
                write_escaped(out, fields_[i].first);
                out += ": ";
                fields_[i].second.write(out, indent, depth + 1);
                if (i + 1 < fields_.size()) out += ',';
                out += '\n';
            }
            out += pad_close + '}';
            break;
        }
    }
}

std::string Json::dump(int indent) const {
    std::string out;
    write(out, indent, 0);
    out += '\n';
    return out;
}

}  // namespace hyperkappa
