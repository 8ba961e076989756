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

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sdconv {

class ShapeError : public std::runtime_error {
public:
    explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Dense rank-3 feature map, row-major (y outermost, channel innermost).
// Element type is double everywhere; exactness tests run on whole-number
// values so cross-path comparisons can assert bitwise equality.
class Tensor3 {
public:
    Tensor3() = default;

    Tensor3(int height, int width, int channels)
        : height_(height), width_(width), channels_(channels) {
        check_dims(height, width, channels);
        data_.assign(static_cast<size_t>(height) * width * channels, 0.0);
    }

    Tensor3(int height, int width, int channels, std::vector<double> values)
        : height_(height), width_(width), channels_(channels), data_(std::move(values)) {
        check_dims(height, width, channels);
        const size_t want = static_cast<size_t>(height) * width * channels;
        if (data_.size() != want) {
            throw ShapeError("tensor data length " + std::to_string(data_.size()) +
                             " does not match " + std::to_string(height) + "x" +
                             std::to_string(width) + "x" + std::to_string(channels) +
                             " = " + std::to_string(want));
        }
    }

    int height() const { return height_; }
    int width() const { return width_; }
    int channels() const { return channels_; }

    size_t size() const { return data_.size(); }

    size_t index(int y, int x, int c) const {
        return (static_cast<size_t>(y) * width_ + x) * channels_ + c;
    }

    double at(int y, int x, int c) const { return data_[index(y, x, c)]; }
    double& at(int y, int x, int c) { return data_[index(y, x, c)]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool same_shape(const Tensor3& o) const {
        return height_ == o.height_ && width_ == o.width_ && channels_ == o.channels_;
    }

    friend bool operator==(const Tensor3& a, const Tensor3& b) {
        return a.same_shape(b) && a.data_ == b.data_;
    }

private:
    static void check_dims(int h, int w, int c) {
        if (h <= 0 || w <= 0 || c <= 0) {
            throw ShapeError("tensor dims must be positive, got " + std::to_string(h) + "x" +
                             std::to_string(w) + "x" + std::to_string(c));
        }
    }

    int height_ = 0;
    int width_ = 0;
    int channels_ = 0;
    std::vector<double> data_;
};

// Dense rank-4 weight array indexed (kh, kw, in_channel, out_channel),
// kh outermost, out_channel innermost.
class FilterBank {
public:
    FilterBank() = default;

    FilterBank(int kh, int kw, int in_channels, int out_channels)
        : kh_(kh), kw_(kw), in_channels_(in_channels), out_channels_(out_channels) {
        check_dims(kh, kw, in_channels, out_channels);
        data_.assign(static_cast<size_t>(kh) * kw * in_channels * out_channels, 0.0);
    }

    FilterBank(int kh, int kw, int in_channels, int out_channels, std::vector<double> values)
        : kh_(kh), kw_(kw), in_channels_(in_channels), out_channels_(out_channels),
          data_(std::move(values)) {
        check_dims(kh, kw, in_channels, out_channels);
        const size_t want = static_cast<size_t>(kh) * kw * in_channels * out_channels;
        if (data_.size() != want) {
            throw ShapeError("filter data length " + std::to_string(data_.size()) +
                             " does not match " + std::to_string(kh) + "x" + std::to_string(kw) +
                             "x" + std::to_string(in_channels) + "x" +
                             std::to_string(out_channels) + " = " + std::to_string(want));
        }
    }

    int kh() const { return kh_; }
    int kw() const { return kw_; }
    int in_channels() const { return in_channels_; }
    int out_channels() const { return out_channels_; }

    size_t size() const { return data_.size(); }

    size_t index(int kh, int kw, int ic, int oc) const {
        return ((static_cast<size_t>(kh) * kw_ + kw) * in_channels_ + ic) * out_channels_ + oc;
    }

    double at(int kh, int kw, int ic, int oc) const { return data_[index(kh, kw, ic, oc)]; }
    double& at(int kh, int kw, int ic, int oc) { return data_[index(kh, kw, ic, oc)]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    friend bool operator==(const FilterBank& a, const FilterBank& b) {
        return a.kh_ == b.kh_ && a.kw_ == b.kw_ && a.in_channels_ == b.in_channels_ &&
               a.out_channels_ == b.out_channels_ && a.data_ == b.data_;
    }

private:
    static void check_dims(int kh, int kw, int ic, int oc) {
        if (kh <= 0 || kw <= 0 || ic <= 0 || oc <= 0) {
            throw ShapeError("filter dims must be positive, got " + std::to_string(kh) + "x" +
                             std::to_string(kw) + "x" + std::to_string(ic) + "x" +
                             std::to_string(oc));
        }
    }

    int kh_ = 0;
    int kw_ = 0;
    int in_channels_ = 0;
    int out_channels_ = 0;
    std::vector<double> data_;
};

inline Tensor3 tensor_new(int height, int width, int channels, std::vector<double> values) {
    return Tensor3(height, width, channels, std::move(values));
}

// Largest |a - b| over all elements; shapes must match.
inline double max_abs_diff(const Tensor3& a, const Tensor3& b) {
    if (!a.same_shape(b)) {
        throw ShapeError("max_abs_diff: shape mismatch");
    }
    double worst = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        const double d = a.data()[i] < b.data()[i] ? b.data()[i] - a.data()[i]
                                                   : a.data()[i] - b.data()[i];
        if (d > worst) worst = d;
    }
    return worst;
}

// Copies the window starting at (top, left) with the given dims.
inline Tensor3 crop(const Tensor3& t, int top, int left, int out_h, int out_w) {
    if (top < 0 || left < 0 || out_h <= 0 || out_w <= 0 || top + out_h > t.height() ||
        left + out_w > t.width()) {
        throw ShapeError("crop window (" + std::to_string(top) + "," + std::to_string(left) +
                         ")+" + std::to_string(out_h) + "x" + std::to_string(out_w) +
                         " outside tensor " + std::to_string(t.height()) + "x" +
                         std::to_string(t.width()));
    }
    Tensor3 out(out_h, out_w, t.channels());
    for (int y = 0; y < out_h; ++y)
        for (int x = 0; x < out_w; ++x)
            for (int c = 0; c < t.channels(); ++c)
                out.at(y, x, c) = t.at(top + y, left + x, c);
    return out;
}

}  // namespace sdconv
