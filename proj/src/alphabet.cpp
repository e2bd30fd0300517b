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

#include "hqmm/alphabet.hpp"

#include "hqmm/error.hpp"

#include <cmath>

namespace hqmm {

Alphabet::Alphabet(std::vector<Symbol> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw Error(ErrorKind::Validation, "alphabet must not be empty");
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        const Symbol& s = labels_[i];
        if (s.empty()) throw Error(ErrorKind::Validation, "symbol labels must be non-empty");
        if (s.find_first_of(" ,") != std::string::npos) {
            throw Error(ErrorKind::Validation, "symbol label '" + s + "' contains a separator");
        }
        if (!index_.emplace(s, static_cast<SymbolIndex>(i)).second) {
            throw Error(ErrorKind::Validation, "duplicate symbol label '" + s + "'");
        }
        if (s.size() != 1) single_char_ = false;
    }
}

bool Alphabet::contains(std::string_view s) const { return index_.count(std::string(s)) > 0; }

SymbolIndex Alphabet::index_of(std::string_view s) const {
    const auto it = index_.find(std::string(s));
    if (it == index_.end()) {
        throw Error(ErrorKind::UnknownSymbol, "symbol '" + std::string(s) + "' is not in the alphabet");
    }
    return it->second;
}

std::vector<SymbolIndex> Alphabet::encode(const Sequence& seq) const {
    std::vector<SymbolIndex> out;
    out.reserve(seq.size());
    for (const auto& s : seq) out.push_back(index_of(s));
    return out;
}

Sequence Alphabet::decode(const std::vector<SymbolIndex>& idx) const {
    Sequence out;
    out.reserve(idx.size());
    for (SymbolIndex i : idx) out.push_back(labels_.at(i));
    return out;
}

std::string render_sequence(const Sequence& seq) {
    bool single = true;
    for (const auto& s : seq) single = single && s.size() == 1;
    std::string out;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (!single && i > 0) out += ' ';
        out += seq[i];
    }
    return out;
}

Sequence parse_sequence(std::string_view text, const Alphabet& alphabet) {
    Sequence out;
    if (text.find_first_of(" ,") != std::string_view::npos) {
        std::string cur;
        for (char c : text) {
            if (c == ' ' || c == ',') {
                if (!cur.empty()) out.push_back(std::move(cur));
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!cur.empty()) out.push_back(std::move(cur));
    } else if (alphabet.single_char()) {
        for (char c : text) out.emplace_back(1, c);
    } else if (!text.empty()) {
        out.emplace_back(text);
    }
    for (const auto& s : out) alphabet.index_of(s);
    return out;
}

void check_enumeration_size(std::size_t alphabet_size, std::size_t length) {
    const double count = std::pow(static_cast<double>(alphabet_size), static_cast<double>(length));
    if (count > kMaxEnumeration) {
        throw Error(ErrorKind::EnumerationTooLarge,
                    std::to_string(alphabet_size) + "^" + std::to_string(length) +
                        " sequences exceeds the 10^6 enumeration limit");
    }
}

double clip_probability(double p) {
    if (p >= 0.0) return p;
    if (p >= -1e-12) return 0.0;
    throw Error(ErrorKind::NumericFailure, "negative probability " + std::to_string(p));
}

}  // namespace hqmm
