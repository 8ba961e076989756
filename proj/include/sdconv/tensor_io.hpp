// Copyright (c) 2026 The sdconv Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sdconv/tensor.hpp"

// Text formats (UTF-8, whitespace separated, full-precision decimals):
//
//   tensor file:  line 1 "tensor H W C", then H*W*C values in layout order
//                 (y outermost, channel innermost)
//   filter file:  line 1 "filter KH KW IC OC", then KH*KW*IC*OC values
//                 (kh outermost, out-channel innermost)
//
// Lines starting with '#' are ignored. Values may be split across lines.

namespace sdconv {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& where, int line, const std::string& msg)
        : std::runtime_error(where + ":" + std::to_string(line) + ": " + msg), line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

namespace detail {

// Token stream over comment-stripped lines, tracking the current line number.
class TokenReader {
public:
    TokenReader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

    // Returns false at end of input.
    bool next(std::string& tok) {
        while (true) {
            if (pos_ < line_.size()) {
                const size_t start = line_.find_first_not_of(" \t\r", pos_);
                if (start != std::string::npos) {
                    size_t end = line_.find_first_of(" \t\r", start);
                    if (end == std::string::npos) end = line_.size();
                    tok = line_.substr(start, end - start);
                    pos_ = end;
                    return true;
                }
            }
            if (!std::getline(in_, line_)) return false;
            ++lineno_;
            pos_ = 0;
            if (!line_.empty() && line_[0] == '#') pos_ = line_.size();
        }
    }

    std::string expect(const std::string& what) {
        std::string tok;
        if (!next(tok)) {
            throw ParseError(name_, lineno_, "unexpected end of file, expected " + what);
        }
        return tok;
    }

    int expect_int(const std::string& what) {
        const std::string tok = expect(what);
        try {
            size_t used = 0;
            const int v = std::stoi(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            throw ParseError(name_, lineno_, "expected integer " + what + ", got '" + tok + "'");
        }
    }

    double expect_double(const std::string& what) {
        const std::string tok = expect(what);
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size()) {
            throw ParseError(name_, lineno_, "expected numeric " + what + ", got '" + tok + "'");
        }
        return v;
    }

    void expect_end() {
        std::string tok;
        if (next(tok)) {
            throw ParseError(name_, lineno_, "trailing token '" + tok + "' after last value");
        }
    }

    int lineno() const { return lineno_; }
    const std::string& name() const { return name_; }

private:
    std::istream& in_;
    std::string name_;
    std::string line_;
    size_t pos_ = 0;
    int lineno_ = 0;
};

// Round-trip-exact decimal rendering.
inline std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::ifstream open_for_read(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError(path, 0, "cannot open file");
    return f;
}

inline std::ofstream open_for_write(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ParseError(path, 0, "cannot open file for writing");
    return f;
}

}  // namespace detail

inline Tensor3 read_tensor_stream(std::istream& in, const std::string& name = "<stream>") {
    detail::TokenReader r(in, name);
    const std::string kind = r.expect("header keyword");
    if (kind != "tensor") {
        throw ParseError(name, r.lineno(), "expected 'tensor' header, got '" + kind + "'");
    }
    const int h = r.expect_int("height");
    const int w = r.expect_int("width");
    const int c = r.expect_int("channels");
    if (h <= 0 || w <= 0 || c <= 0) {
        throw ParseError(name, r.lineno(), "tensor dims must be positive");
    }
    std::vector<double> values;
    values.reserve(static_cast<size_t>(h) * w * c);
    for (size_t i = 0, n = static_cast<size_t>(h) * w * c; i < n; ++i) {
        values.push_back(r.expect_double("value " + std::to_string(i)));
    }
    r.expect_end();
    return Tensor3(h, w, c, std::move(values));
}

inline FilterBank read_filter_stream(std::istream& in, const std::string& name = "<stream>") {
    detail::TokenReader r(in, name);
    const std::string kind = r.expect("header keyword");
    if (kind != "filter") {
        throw ParseError(name, r.lineno(), "expected 'filter' header, got '" + kind + "'");
    }
    const int kh = r.expect_int("kernel height");
    const int kw = r.expect_int("kernel width");
    const int ic = r.expect_int("input channels");
    const int oc = r.expect_int("output channels");
    if (kh <= 0 || kw <= 0 || ic <= 0 || oc <= 0) {
        throw ParseError(name, r.lineno(), "filter dims must be positive");
    }
    std::vector<double> values;
    values.reserve(static_cast<size_t>(kh) * kw * ic * oc);
    for (size_t i = 0, n = static_cast<size_t>(kh) * kw * ic * oc; i < n; ++i) {
        values.push_back(r.expect_double("value " + std::to_string(i)));
    }
    r.expect_end();
    return FilterBank(kh, kw, ic, oc, std::move(values));
}

inline Tensor3 read_tensor_file(const std::string& path) {
    auto f = detail::open_for_read(path);
    return read_tensor_stream(f, path);
}

inline FilterBank read_filter_file(const std::string& path) {
    auto f = detail::open_for_read(path);
    return read_filter_stream(f, path);
}

inline void write_tensor_stream(std::ostream& out, const Tensor3& t) {
    out << "tensor " << t.height() << ' ' << t.width() << ' ' << t.channels() << '\n';
    for (int y = 0; y < t.height(); ++y) {
        for (int x = 0; x < t.width(); ++x) {
            for (int c = 0; c < t.channels(); ++c) {
                if (x != 0 || c != 0) out << ' ';
                out << detail::format_value(t.at(y, x, c));
            }
        }
        out << '\n';
    }
}

inline void write_filter_stream(std::ostream& out, const FilterBank& f) {
    out << "filter " << f.kh() << ' ' << f.kw() << ' ' << f.in_channels() << ' '
        << f.out_channels() << '\n';
    for (int kh = 0; kh < f.kh(); ++kh) {
        for (int kw = 0; kw < f.kw(); ++kw) {
            for (int ic = 0; ic < f.in_channels(); ++ic) {
                for (int oc = 0; oc < f.out_channels(); ++oc) {
                    if (ic != 0 || oc != 0) out << ' ';
                    out << detail::format_value(f.at(kh, kw, ic, oc));
                }
            }
            out << '\n';
        }
    }
}

inline void write_tensor_file(const std::string& path, const Tensor3& t) {
    auto f = detail::open_for_write(path);
    write_tensor_stream(f, t);
}

inline void write_filter_file(const std::string& path, const FilterBank& fb) {
    auto f = detail::open_for_write(path);
    write_filter_stream(f, fb);
}

}  // namespace sdconv
