/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The d2dsim Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace d2dsim {

/// Fixed-width little-endian bit vector. Bit 0 is the least significant.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t width) : width_(width), words_((width + 63) / 64, 0) {}

    std::size_t width() const noexcept { return width_; }

    /// Reads `count` (<= 64) bits starting at `lsb`.
    std::uint64_t get(std::size_t lsb, unsigned count) const {
        check_range(lsb, count);
        if (count == 0) return 0;
        const std::size_t w = lsb / 64;
        const unsigned off = lsb % 64;
        std::uint64_t v = words_[w] >> off;
        if (off != 0 && off + count > 64) v |= words_[w + 1] << (64 - off);
        return v & mask(count);
    }

    /// Writes the low `count` (<= 64) bits of `value` starting at `lsb`.
    void set(std::size_t lsb, unsigned count, std::uint64_t value) {
        check_range(lsb, count);
        if (count == 0) return;
        value &= mask(count);
        const std::size_t w = lsb / 64;
        const unsigned off = lsb % 64;
        words_[w] = (words_[w] & ~(mask(count) << off)) | (value << off);
        if (off != 0 && off + count > 64) {
            const unsigned spill = off + count - 64;
            words_[w + 1] = (words_[w + 1] & ~mask(spill)) | (value >> (64 - off));
        }
    }

    bool bit(std::size_t i) const { return get(i, 1) != 0; }

    BitVector slice(std::size_t lsb, std::size_t count) const {
        if (lsb + count > width_) throw std::out_of_range("BitVector::slice out of range");
        BitVector out(count);
        for (std::size_t done = 0; done < count;) {
            const auto n = static_cast<unsigned>(std::min<std::size_t>(64, count - done));
            out.set(done, n, get(lsb + done, n));
            done += n;
        }
        return out;
    }

    /// Copies `src` into this vector at `lsb`.
    void insert(std::size_t lsb, const BitVector& src) {
        if (lsb + src.width() > width_) throw std::out_of_range("BitVector::insert out of range");
        for (std::size_t done = 0; done < src.width();) {
            const auto n = static_cast<unsigned>(std::min<std::size_t>(64, src.width() - done));
            set(lsb + done, n, src.get(done, n));
            done += n;
        }
    }

    bool operator==(const BitVector&) const = default;

    /// Most significant nibble first, padded to whole nibbles.
    std::string to_hex() const {
        static constexpr char digits[] = "0123456789abcdef";
        const std::size_t nibbles = (width_ + 3) / 4;
        std::string s(nibbles, '0');
        for (std::size_t i = 0; i < nibbles; ++i) {
            const std::size_t lsb = i * 4;
            const auto n = static_cast<unsigned>(std::min<std::size_t>(4, width_ - lsb));
            s[nibbles - 1 - i] = digits[get(lsb, n)];
        }
        return s;
    }

private:
    static constexpr std::uint64_t mask(unsigned count) {
        return count >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << count) - 1);
    }

    void check_range(std::size_t lsb, unsigned count) const {
        if (count > 64 || lsb + count > width_) throw std::out_of_range("BitVector access out of range");
    }

    std::size_t width_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace d2dsim
