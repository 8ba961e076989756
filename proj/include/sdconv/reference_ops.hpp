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

#include <cstdint>

#include "sdconv/tensor.hpp"

// Ground-truth implementations. Deliberately direct and loop-based: these
// are the oracles every optimized path is checked against, so they stay
// free of layout tricks and fast-path special cases.

namespace sdconv {

// Counts multiply operations actually executed by the reference kernels.
// Pass to any op below to audit its work against the structural analyzer.
struct MacCounter {
    std::uint64_t multiplies = 0;
};

struct ConvParams {
    int stride = 1;
    int pad = 0;  // symmetric zero rows/cols added to each input edge
};

inline int conv_out_dim(int in, int k, int stride, int pad) {
    return (in + 2 * pad - k) / stride + 1;
}

// Direct convolution. out(oh,ow,oc) = sum over (ic,kh,kw) ascending of
// paddedInput(oh*s+kh, ow*s+kw, ic) * w(kh,kw,ic,oc).
inline Tensor3 conv2d(const Tensor3& input, const FilterBank& filters, const ConvParams& params,
                      MacCounter* macs = nullptr) {
    if (filters.in_channels() != input.channels()) {
        throw ShapeError("conv2d: filter expects " + std::to_string(filters.in_channels()) +
                         " input channels, tensor has " + std::to_string(input.channels()));
    }
    if (params.stride < 1 || params.pad < 0) {
        throw ShapeError("conv2d: stride must be >= 1 and pad >= 0");
    }
    const int out_h = conv_out_dim(input.height(), filters.kh(), params.stride, params.pad);
    const int out_w = conv_out_dim(input.width(), filters.kw(), params.stride, params.pad);
    if (input.height() + 2 * params.pad < filters.kh() ||
        input.width() + 2 * params.pad < filters.kw() || out_h < 1 || out_w < 1) {
        throw ShapeError("conv2d: kernel " + std::to_string(filters.kh()) + "x" +
                         std::to_string(filters.kw()) + " larger than padded input " +
                         std::to_string(input.height() + 2 * params.pad) + "x" +
                         std::to_string(input.width() + 2 * params.pad));
    }

    Tensor3 out(out_h, out_w, filters.out_channels());
    for (int oh = 0; oh < out_h; ++oh) {
        for (int ow = 0; ow < out_w; ++ow) {
            for (int oc = 0; oc < filters.out_channels(); ++oc) {
                double acc = 0.0;
                for (int ic = 0; ic < input.channels(); ++ic) {
                    for (int kh = 0; kh < filters.kh(); ++kh) {
                        const int y = oh * params.stride + kh - params.pad;
                        if (y < 0 || y >= input.height()) continue;
                        for (int kw = 0; kw < filters.kw(); ++kw) {
                            const int x = ow * params.stride + kw - params.pad;
                            if (x < 0 || x >= input.width()) continue;
                            acc += input.at(y, x, ic) * filters.at(kh, kw, ic, oc);
                            if (macs) ++macs->multiplies;
                        }
                    }
                }
                out.at(oh, ow, oc) = acc;
            }
        }
    }
    return out;
}

namespace detail {

inline void check_deconv_args(const Tensor3& input, const FilterBank& filters, int stride,
                              int crop) {
    if (filters.in_channels() != input.channels()) {
        throw ShapeError("deconv: filter expects " + std::to_string(filters.in_channels()) +
                         " input channels, tensor has " + std::to_string(input.channels()));
    }
    if (stride < 1) throw ShapeError("deconv: stride must be >= 1");
    const int out_h = stride * (input.height() - 1) + filters.kh();
    const int out_w = stride * (input.width() - 1) + filters.kw();
    if (crop < 0 || 2 * crop >= out_h || 2 * crop >= out_w) {
        throw ShapeError("deconv: crop " + std::to_string(crop) + " leaves no output from " +
                         std::to_string(out_h) + "x" + std::to_string(out_w));
    }
}

inline Tensor3 crop_edges(Tensor3 t, int c) {
    if (c == 0) return t;
    return crop(t, c, c, t.height() - 2 * c, t.width() - 2 * c);
}

}  // namespace detail

// Brute-force transposed convolution, scatter style: every input element is
// scaled by the whole filter and accumulated at stride-s offsets. Output is
// (s*(IH-1)+KH, s*(IW-1)+KW, OC) before the optional edge crop. This is the
// oracle all converted paths must match bitwise on whole-number inputs.
inline Tensor3 deconv2d_oracle(const Tensor3& input, const FilterBank& filters, int stride,
                               int crop = 0, MacCounter* macs = nullptr) {
    detail::check_deconv_args(input, filters, stride, crop);
    const int out_h = stride * (input.height() - 1) + filters.kh();
    const int out_w = stride * (input.width() - 1) + filters.kw();

    Tensor3 out(out_h, out_w, filters.out_channels());
    for (int ih = 0; ih < input.height(); ++ih) {
        for (int iw = 0; iw < input.width(); ++iw) {
            for (int ic = 0; ic < input.channels(); ++ic) {
                const double v = input.at(ih, iw, ic);
                for (int kh = 0; kh < filters.kh(); ++kh) {
                    for (int kw = 0; kw < filters.kw(); ++kw) {
                        for (int oc = 0; oc < filters.out_channels(); ++oc) {
                            out.at(ih * stride + kh, iw * stride + kw, oc) +=
                                v * filters.at(kh, kw, ic, oc);
                            if (macs) ++macs->multiplies;
                        }
                    }
                }
            }
        }
    }
    return detail::crop_edges(std::move(out), crop);
}

// Zero-insertion expansion: (s-1) zeros between adjacent elements on each
// axis, then (k-1) zeros on every edge. The convolution of the result with
// the rotated filter at stride 1 reproduces the deconvolution.
inline Tensor3 nzp_expand(const Tensor3& input, int kh, int kw, int stride) {
    if (stride < 1 || kh < 1 || kw < 1) {
        throw ShapeError("nzp_expand: kernel dims and stride must be >= 1");
    }
    const int inner_h = stride * (input.height() - 1) + 1;
    const int inner_w = stride * (input.width() - 1) + 1;
    Tensor3 out(inner_h + 2 * (kh - 1), inner_w + 2 * (kw - 1), input.channels());
    for (int y = 0; y < input.height(); ++y)
        for (int x = 0; x < input.width(); ++x)
            for (int c = 0; c < input.channels(); ++c)
                out.at(kh - 1 + y * stride, kw - 1 + x * stride, c) = input.at(y, x, c);
    return out;
}

// 180-degree spatial rotation; channel axes untouched.
inline FilterBank rot180(const FilterBank& filters) {
    FilterBank out(filters.kh(), filters.kw(), filters.in_channels(), filters.out_channels());
    for (int kh = 0; kh < filters.kh(); ++kh)
        for (int kw = 0; kw < filters.kw(); ++kw)
            for (int ic = 0; ic < filters.in_channels(); ++ic)
                for (int oc = 0; oc < filters.out_channels(); ++oc)
                    out.at(filters.kh() - 1 - kh, filters.kw() - 1 - kw, ic, oc) =
                        filters.at(kh, kw, ic, oc);
    return out;
}

// Deconvolution by naive zero padding: expand the input, rotate the filter,
// convolve at stride 1. Must equal deconv2d_oracle exactly.
inline Tensor3 nzp_deconv2d(const Tensor3& input, const FilterBank& filters, int stride,
                            int crop = 0, MacCounter* macs = nullptr) {
    detail::check_deconv_args(input, filters, stride, crop);
    const Tensor3 expanded = nzp_expand(input, filters.kh(), filters.kw(), stride);
    Tensor3 out = conv2d(expanded, rot180(filters), ConvParams{1, 0}, macs);
    return detail::crop_edges(std::move(out), crop);
}

}  // namespace sdconv
