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

#include <string>

#include "sdconv/tensor.hpp"

namespace sdconv {

enum class LayerKind { Conv, Deconv };

inline const char* to_string(LayerKind k) {
    return k == LayerKind::Conv ? "conv" : "deconv";
}

// Shape/stride description of one layer. Deconv output is s*(in-1)+k per
// axis (no implicit padding); conv requires (in-k) divisible by the stride.
struct LayerSpec {
    LayerKind kind = LayerKind::Deconv;
    int in_h = 0;
    int in_w = 0;
    int in_c = 0;
    int kh = 0;
    int kw = 0;
    int out_c = 0;
    int stride = 1;

    int out_h() const {
        return kind == LayerKind::Deconv ? stride * (in_h - 1) + kh : (in_h - kh) / stride + 1;
    }
    int out_w() const {
        return kind == LayerKind::Deconv ? stride * (in_w - 1) + kw : (in_w - kw) / stride + 1;
    }

    std::string describe() const {
        return std::string(to_string(kind)) + " in=" + std::to_string(in_h) + "x" +
               std::to_string(in_w) + "x" + std::to_string(in_c) + " k=" + std::to_string(kh) +
               "x" + std::to_string(kw) + " out=" + std::to_string(out_c) +
               " stride=" + std::to_string(stride);
    }

    void validate() const {
        if (in_h <= 0 || in_w <= 0 || in_c <= 0 || kh <= 0 || kw <= 0 || out_c <= 0) {
            throw ShapeError("layer dims must be positive: " + describe());
        }
        if (stride < 1) {
            throw ShapeError("stride must be >= 1: " + describe());
        }
        if (kind == LayerKind::Conv) {
            if (in_h < kh || in_w < kw) {
                throw ShapeError("conv kernel larger than input: " + describe());
            }
            if ((in_h - kh) % stride != 0 || (in_w - kw) % stride != 0) {
                throw ShapeError("conv (in - k) not divisible by stride: " + describe());
            }
        }
    }

    friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

}  // namespace sdconv
