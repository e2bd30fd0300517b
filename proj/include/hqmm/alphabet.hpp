// Copyright 2026 The hqmm Authors
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
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hqmm {

using Symbol = std::string;
using Sequence = std::vector<Symbol>;
using SymbolIndex = std::uint32_t;

/// Ordered set of distinct, non-empty output labels. The order fixes the
/// inverse-CDF order used when sampling.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<Symbol> labels);

    std::size_t size() const noexcept { return labels_.size(); }
    const Symbol& label(std::size_t i) const { return labels_.at(i); }
    const std::vector<Symbol>& labels() const noexcept { return labels_; }
    bool contains(std::string_view s) const;

    /// Throws UnknownSymbol.
    SymbolIndex index_of(std::string_view s) const;
    std::vector<SymbolIndex> encode(const Sequence& seq) const;
    Sequence decode(const std::vector<SymbolIndex>& idx) const;

    /// True when every label is one character, so sequences render as plain
    /// concatenations ("0110").
    bool single_char() const noexcept { return single_char_; }

private:
    std::vector<Symbol> labels_;
    std::unordered_map<std::string, SymbolIndex> index_;
    bool single_char_ = true;
};

/// Concatenation for single-character labels, space-joined otherwise.
std::string render_sequence(const Sequence& seq);

/// Inverse of render_sequence. Text containing spaces or commas is split on
/// them; otherwise single-character alphabets split per character and any
/// other alphabet treats the whole text as one symbol.
Sequence parse_sequence(std::string_view text, const Alphabet& alphabet);

inline constexpr double kMaxEnumeration = 1e6;

/// Throws EnumerationTooLarge when alphabet_size^length exceeds 10^6.
void check_enumeration_size(std::size_t alphabet_size, std::size_t length);

/// Clips probabilities in [−1e-12, 0) to zero; more negative values raise
/// NumericFailure.
double clip_probability(double p);

}  // namespace hqmm
