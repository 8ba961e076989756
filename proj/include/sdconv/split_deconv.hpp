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
#include <utility>
#include <vector>

#include "sdconv/reference_ops.hpp"
#include "sdconv/tensor.hpp"

// Split deconvolution: lower one stride-s transposed convolution into
// N = s^2 standard stride-1 convolutions.
//
//   1. expand_filter   — zero rows/cols on the top/left until the kernel is
//                        divisible by s (P_K per axis)
//   2. split_filters   — sample the expanded kernel with stride s into N
//                        sub-filters of size K_T = ceil(K/s), each written in
//                        180-degree-rotated order
//   3. pad_input_sd    — P_I = K_T - 1 zero ring around the input
//   4. conv + merge    — run the N convolutions, interleave their outputs
//                        with stride s, crop P_K rows/cols from the top/left
//
// Steps 1-2 are input-independent and reusable (SplitPlan); steps 3-4 run
// per input tensor. The result equals deconv2d_oracle exactly.

namespace sdconv {

inline int ceil_div(int a, int b) { return (a + b - 1) / b; }

// Derived split parameters plus the N sub-filter banks.
// kt = ceil(K/s), pk = s*kt - K, pi = kt - 1, n_splits = s^2, all per axis.
struct SplitPlan {
    int stride = 1;
    int kt_h = 0, kt_w = 0;
    int pk_h = 0, pk_w = 0;
    int pi_h = 0, pi_w = 0;
    int n_splits = 1;
    std::vector<FilterBank> sub_filters;

    // Original kernel size (before zero expansion).
    int orig_kh() const { return stride * kt_h - pk_h; }
    int orig_kw() const { return stride * kt_w - pk_w; }
};

// Where split outputs land in the final map: sub-output element (y, x) of
// split n goes to (y*s + n/s - crop_top, x*s + n%s - crop_left), and the
// result is trimmed to final_h x final_w.
struct MergeMap {
    int stride = 1;
    int final_h = 0, final_w = 0;
    int crop_top = 0, crop_left = 0;
};

// Zero-expands the kernel on the top and left so both axes divide by the
// stride. Returns the input unchanged when already divisible.
inline FilterBank expand_filter(const FilterBank& filters, int stride) {
    if (stride < 1) throw ShapeError("expand_filter: stride must be >= 1");
    const int pk_h = stride * ceil_div(filters.kh(), stride) - filters.kh();
    const int pk_w = stride * ceil_div(filters.kw(), stride) - filters.kw();
    if (pk_h == 0 && pk_w == 0) return filters;

    FilterBank out(filters.kh() + pk_h, filters.kw() + pk_w, filters.in_channels(),
                   filters.out_channels());
    for (int kh = 0; kh < filters.kh(); ++kh)
        for (int kw = 0; kw < filters.kw(); ++kw)
            for (int ic = 0; ic < filters.in_channels(); ++ic)
                for (int oc = 0; oc < filters.out_channels(); ++oc)
                    out.at(pk_h + kh, pk_w + kw, ic, oc) = filters.at(kh, kw, ic, oc);
    return out;
}

// Splits an expanded kernel into s^2 sub-filters. Sub-filter n samples the
// expanded rows n/s, n/s + s, ... and cols n%s, n%s + s, ...; destination
// indices start at K_T - 1 and decrement, which rotates each sample grid by
// 180 degrees. pk_h/pk_w identify the structural zero expansion applied by
// expand_filter (not recoverable from the weight values themselves).
inline SplitPlan split_filters(const FilterBank& expanded, int stride, int pk_h, int pk_w) {
    if (stride < 1) throw ShapeError("split_filters: stride must be >= 1");
    if (expanded.kh() % stride != 0 || expanded.kw() % stride != 0) {
        throw ShapeError("split_filters: expanded kernel " + std::to_string(expanded.kh()) + "x" +
                         std::to_string(expanded.kw()) + " not divisible by stride " +
                         std::to_string(stride));
    }
    if (pk_h < 0 || pk_h >= stride || pk_w < 0 || pk_w >= stride) {
        throw ShapeError("split_filters: expansion padding must lie in [0, stride)");
    }

    SplitPlan plan;
    plan.stride = stride;
    plan.kt_h = expanded.kh() / stride;
    plan.kt_w = expanded.kw() / stride;
    plan.pk_h = pk_h;
    plan.pk_w = pk_w;
    plan.pi_h = plan.kt_h - 1;
    plan.pi_w = plan.kt_w - 1;
    plan.n_splits = stride * stride;
    plan.sub_filters.reserve(plan.n_splits);

    for (int n = 0; n < plan.n_splits; ++n) {
        FilterBank sub(plan.kt_h, plan.kt_w, expanded.in_channels(), expanded.out_channels());
        int k_th = plan.kt_h - 1;
        for (int kh = n / stride; kh < expanded.kh(); kh += stride) {
            int k_tw = plan.kt_w - 1;
            for (int kw = n % stride; kw < expanded.kw(); kw += stride) {
                for (int ic = 0; ic < expanded.in_channels(); ++ic)
                    for (int oc = 0; oc < expanded.out_channels(); ++oc)
                        sub.at(k_th, k_tw, ic, oc) = expanded.at(kh, kw, ic, oc);
                --k_tw;
            }
            --k_th;
        }
        plan.sub_filters.push_back(std::move(sub));
    }
    return plan;
}

// One-shot plan construction from the original deconvolution filter.
inline SplitPlan make_split_plan(const FilterBank& filters, int stride) {
    const int pk_h = stride * ceil_div(filters.kh(), stride) - filters.kh();
    const int pk_w = stride * ceil_div(filters.kw(), stride) - filters.kw();
    return split_filters(expand_filter(filters, stride), stride, pk_h, pk_w);
}

// P_I zero rows above and below, P_I zero cols left and right. Without the
// ring the split convolutions would drop the edge outputs.
inline Tensor3 pad_input_sd(const Tensor3& input, const SplitPlan& plan) {
    if (plan.pi_h == 0 && plan.pi_w == 0) return input;
    Tensor3 out(input.height() + 2 * plan.pi_h, input.width() + 2 * plan.pi_w, input.channels());
    for (int y = 0; y < input.height(); ++y)
        for (int x = 0; x < input.width(); ++x)
            for (int c = 0; c < input.channels(); ++c)
                out.at(plan.pi_h + y, plan.pi_w + x, c) = input.at(y, x, c);
    return out;
}

// Crop offsets: the top/left zero expansion of the kernel shifts the merged
// map down/right by exactly P_K, so the true output is the window starting
// at (P_K, P_K). Validated against the oracle over the exactness grid.
inline MergeMap make_merge_map(const SplitPlan& plan, int in_h, int in_w) {
    MergeMap map;
    map.stride = plan.stride;
    map.final_h = plan.stride * (in_h - 1) + plan.orig_kh();
    map.final_w = plan.stride * (in_w - 1) + plan.orig_kw();
    map.crop_top = plan.pk_h;
    map.crop_left = plan.pk_w;
    return map;
}

// Interleaves the N sub-outputs with stride s and crops to the final dims.
// Every pre-crop coordinate must be written exactly once; a violation means
// the plan is inconsistent and is reported as an internal error.
inline Tensor3 merge_outputs(const std::vector<Tensor3>& sub_outputs, const MergeMap& map) {
    const int s = map.stride;
    if (static_cast<int>(sub_outputs.size()) != s * s) {
        throw ShapeError("merge_outputs: expected " + std::to_string(s * s) + " sub-outputs, got " +
                         std::to_string(sub_outputs.size()));
    }
    const Tensor3& first = sub_outputs.front();
    for (const Tensor3& t : sub_outputs) {
        if (!t.same_shape(first)) throw ShapeError("merge_outputs: sub-output shapes differ");
    }

    const int merged_h = s * first.height();
    const int merged_w = s * first.width();
    if (map.crop_top < 0 || map.crop_left < 0 || map.crop_top + map.final_h > merged_h ||
        map.crop_left + map.final_w > merged_w) {
        throw ShapeError("merge_outputs: crop window exceeds merged map " +
                         std::to_string(merged_h) + "x" + std::to_string(merged_w));
    }

    Tensor3 merged(merged_h, merged_w, first.channels());
    std::vector<std::uint8_t> written(static_cast<size_t>(merged_h) * merged_w, 0);
    for (int n = 0; n < s * s; ++n) {
        const Tensor3& sub = sub_outputs[n];
        const int off_y = n / s;
        const int off_x = n % s;
        for (int y = 0; y < sub.height(); ++y) {
            for (int x = 0; x < sub.width(); ++x) {
                const int my = y * s + off_y;
                const int mx = x * s + off_x;
                ++written[static_cast<size_t>(my) * merged_w + mx];
                for (int c = 0; c < sub.channels(); ++c) merged.at(my, mx, c) = sub.at(y, x, c);
            }
        }
    }
    for (size_t i = 0; i < written.size(); ++i) {
        if (written[i] != 1) {
            throw ShapeError("merge_outputs: internal error, merged cell " + std::to_string(i) +
                             " written " + std::to_string(written[i]) + " times");
        }
    }
    return crop(merged, map.crop_top, map.crop_left, map.final_h, map.final_w);
}

// Full split-deconvolution pipeline against a precomputed plan. The merge
// map may be overridden (test hook for deliberately corrupted crops).
inline Tensor3 sd_deconv2d_with_map(const Tensor3& input, const SplitPlan& plan,
                                    const MergeMap& map, int crop = 0,
                                    MacCounter* macs = nullptr) {
    if (!plan.sub_filters.empty() && plan.sub_filters.front().in_channels() != input.channels()) {
        throw ShapeError("sd_deconv2d: filter expects " +
                         std::to_string(plan.sub_filters.front().in_channels()) +
                         " input channels, tensor has " + std::to_string(input.channels()));
    }
    const Tensor3 padded = pad_input_sd(input, plan);
    const int want_h = input.height() + plan.kt_h - 1;
    const int want_w = input.width() + plan.kt_w - 1;

    std::vector<Tensor3> sub_outputs;
    sub_outputs.reserve(plan.sub_filters.size());
    for (const FilterBank& sub : plan.sub_filters) {
        Tensor3 out = conv2d(padded, sub, ConvParams{1, 0}, macs);
        if (out.height() != want_h || out.width() != want_w) {
            throw ShapeError("sd_deconv2d: split output " + std::to_string(out.height()) + "x" +
                             std::to_string(out.width()) + ", expected " + std::to_string(want_h) +
                             "x" + std::to_string(want_w));
        }
        sub_outputs.push_back(std::move(out));
    }

    // Merged excess over the true output must be exactly P_K per axis.
    const int merged_h = plan.stride * want_h;
    const int merged_w = plan.stride * want_w;
    if (merged_h - map.final_h != plan.pk_h || merged_w - map.final_w != plan.pk_w) {
        throw ShapeError("sd_deconv2d: merged map " + std::to_string(merged_h) + "x" +
                         std::to_string(merged_w) + " does not exceed output " +
                         std::to_string(map.final_h) + "x" + std::to_string(map.final_w) +
                         " by P_K");
    }

    Tensor3 out = merge_outputs(sub_outputs, map);
    return detail::crop_edges(std::move(out), crop);
}

inline Tensor3 sd_deconv2d(const Tensor3& input, const SplitPlan& plan, int crop = 0,
                           MacCounter* macs = nullptr) {
    const MergeMap map = make_merge_map(plan, input.height(), input.width());
    if (crop < 0 || 2 * crop >= map.final_h || 2 * crop >= map.final_w) {
        throw ShapeError("sd_deconv2d: crop " + std::to_string(crop) + " leaves no output");
    }
    return sd_deconv2d_with_map(input, plan, map, crop, macs);
}

inline Tensor3 sd_deconv2d(const Tensor3& input, const FilterBank& filters, int stride,
                           int crop = 0, MacCounter* macs = nullptr) {
    detail::check_deconv_args(input, filters, stride, crop);
    return sd_deconv2d(input, make_split_plan(filters, stride), crop, macs);
}

}  // namespace sdconv
