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

#include "hqmm/model_io.hpp"

#include "hqmm/error.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <array>
#include <optional>
#include <fstream>
#include <sstream>

namespace hqmm {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorKind::Parse, what); }

const json& field(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) parse_fail(where + " must be an object");
    const auto it = obj.find(key);
    if (it == obj.end()) parse_fail(where + " is missing \"" + key + "\"");
    return *it;
}

double read_real(const json& j, const std::string& where) {
    if (!j.is_number()) parse_fail(where + " must be a number");
    return j.get<double>();
}

Complex read_complex(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        parse_fail(where + " must be a [re, im] pair");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

template <typename Scalar, typename ReadEntry>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> read_matrix(const json& j, const std::string& where,
                                                                  ReadEntry read_entry) {
    if (!j.is_array() || j.empty()) parse_fail(where + " must be a non-empty array of rows");
    const auto rows = static_cast<Index>(j.size());
    Index cols = -1;
    for (const auto& row : j) {
        if (!row.is_array()) parse_fail(where + " rows must be arrays");
        if (cols < 0) cols = static_cast<Index>(row.size());
        if (static_cast<Index>(row.size()) != cols) {
            throw Error(ErrorKind::DimensionMismatch, where + " has rows of unequal length");
        }
    }
    if (rows != cols) {
        throw Error(ErrorKind::DimensionMismatch,
                    where + " must be square, got " + std::to_string(rows) + "x" + std::to_string(cols));
    }
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        for (Index c = 0; c < cols; ++c) {
            m(r, c) = read_entry(j[r][c], where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
        }
    }
    return m;
}

ComplexMatrix read_complex_matrix(const json& j, const std::string& where) {
    return read_matrix<Complex>(j, where, read_complex);
}

RealMatrix read_real_matrix(const json& j, const std::string& where) {
    return read_matrix<double>(j, where, read_real);
}

Symbol read_symbol(const json& j, const std::string& where) {
    if (!j.is_string()) parse_fail(where + " must be a string");
    return j.get<std::string>();
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json complex_matrix_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

json real_matrix_json(const RealMatrix& m) {
    json rows = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Hmm parse_hmm(const json& body) {
    const json& transitions = field(body, "transitions", "hmm");
    if (!transitions.is_array() || transitions.empty()) parse_fail("hmm.transitions must be a non-empty array");
    std::vector<Symbol> labels;
    std::vector<RealMatrix> mats;
    for (std::size_t i = 0; i < transitions.size(); ++i) {
        const std::string where = "hmm.transitions[" + std::to_string(i) + "]";
        labels.push_back(read_symbol(field(transitions[i], "symbol", where), where + ".symbol"));
        mats.push_back(read_real_matrix(field(transitions[i], "matrix", where), where + ".matrix"));
    }
    const json& init = field(body, "initial", "hmm");
    if (!init.is_array()) parse_fail("hmm.initial must be an array");
    RealVector p(static_cast<Index>(init.size()));
    for (std::size_t i = 0; i < init.size(); ++i) {
        p(static_cast<Index>(i)) = read_real(init[i], "hmm.initial[" + std::to_string(i) + "]");
    }
    return Hmm(Alphabet(std::move(labels)), std::move(mats), std::move(p));
}

Hqmm parse_hqmm(const json& body) {
    const json& kraus = field(body, "kraus", "hqmm");
    if (!kraus.is_array() || kraus.empty()) parse_fail("hqmm.kraus must be a non-empty array");
    std::vector<KrausOperator> ops;
    for (std::size_t i = 0; i < kraus.size(); ++i) {
        const std::string where = "hqmm.kraus[" + std::to_string(i) + "]";
        ops.push_back({read_symbol(field(kraus[i], "symbol", where), where + ".symbol"),
                       read_complex_matrix(field(kraus[i], "matrix", where), where + ".matrix")});
    }
    double tol = kDefaultCompletenessTol;
    if (body.contains("completeness_tol")) tol = read_real(body["completeness_tol"], "hqmm.completeness_tol");
    std::optional<LabeledKrausSet> set;
    if (body.contains("alphabet")) {
        const json& a = body["alphabet"];
        if (!a.is_array()) parse_fail("hqmm.alphabet must be an array of strings");
        std::vector<Symbol> labels;
        for (std::size_t i = 0; i < a.size(); ++i) {
            labels.push_back(read_symbol(a[i], "hqmm.alphabet[" + std::to_string(i) + "]"));
        }
        Alphabet alphabet(std::move(labels));
        for (const auto& op : ops) {
            if (!alphabet.contains(op.symbol)) {
                throw Error(ErrorKind::Validation, "Kraus symbol '" + op.symbol + "' is not in hqmm.alphabet");
            }
        }
        set.emplace(std::move(alphabet), std::move(ops), tol);
    } else {
        set.emplace(std::move(ops), tol);
    }
    DensityMatrix initial(read_complex_matrix(field(body, "initial", "hqmm"), "hqmm.initial"));
    return Hqmm(std::move(*set), std::move(initial));
}

OpenSystemModel parse_open_system(const json& body) {
    ComplexMatrix h = read_complex_matrix(field(body, "H_int", "open_system"), "open_system.H_int");
    const json& channels = field(body, "channels", "open_system");
    if (!channels.is_array()) parse_fail("open_system.channels must be an array");
    std::vector<FeedbackChannel> chans;
    for (std::size_t i = 0; i < channels.size(); ++i) {
        const std::string where = "open_system.channels[" + std::to_string(i) + "]";
        FeedbackChannel ch;
        ch.symbol = read_symbol(field(channels[i], "symbol", where), where + ".symbol");
        ch.feedback = read_complex_matrix(field(channels[i], "R", where), where + ".R");
        const json& terms = field(channels[i], "terms", where);
        if (!terms.is_array()) parse_fail(where + ".terms must be an array");
        for (std::size_t t = 0; t < terms.size(); ++t) {
            const std::string tw = where + ".terms[" + std::to_string(t) + "]";
            ch.terms.push_back({read_complex(field(terms[t], "xi", tw), tw + ".xi"),
                                read_complex_matrix(field(terms[t], "L", tw), tw + ".L")});
        }
        chans.push_back(std::move(ch));
    }
    const double dt = read_real(field(body, "dt", "open_system"), "open_system.dt");
    OpenSystemSpec spec(std::move(h), std::move(chans), dt);
    DensityMatrix initial(read_complex_matrix(field(body, "initial", "open_system"), "open_system.initial"));
    if (initial.dim() != spec.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "open_system.initial does not match H_int dimension");
    }
    return OpenSystemModel{std::move(spec), std::move(initial)};
}

json hmm_json(const Hmm& m) {
    json transitions = json::array();
    for (std::size_t i = 0; i < m.alphabet().size(); ++i) {
        transitions.push_back({{"symbol", m.alphabet().label(i)},
                               {"matrix", real_matrix_json(m.transition(static_cast<SymbolIndex>(i)))}});
    }
    json init = json::array();
    for (Index i = 0; i < m.initial().size(); ++i) init.push_back(m.initial()(i));
    return {{"transitions", std::move(transitions)}, {"initial", std::move(init)}};
}

json hqmm_json(const Hqmm& m) {
    json kraus = json::array();
    for (const auto& op : m.kraus().operators()) {
        kraus.push_back({{"symbol", op.symbol}, {"matrix", complex_matrix_json(op.matrix)}});
    }
    return {{"alphabet", m.alphabet().labels()},
            {"kraus", std::move(kraus)},
            {"completeness_tol", m.kraus().completeness_tol()},
            {"initial", complex_matrix_json(m.initial().matrix())}};
}

json open_system_json(const OpenSystemModel& m) {
    json channels = json::array();
    for (const auto& ch : m.spec.channels()) {
        json terms = json::array();
        for (const auto& t : ch.terms) terms.push_back({{"xi", complex_json(t.amplitude)}, {"L", complex_matrix_json(t.op)}});
        channels.push_back({{"symbol", ch.symbol}, {"R", complex_matrix_json(ch.feedback)}, {"terms", std::move(terms)}});
    }
    return {{"H_int", complex_matrix_json(m.spec.hamiltonian())},
            {"channels", std::move(channels)},
            {"dt", m.spec.dt()},
            {"initial", complex_matrix_json(m.initial.matrix())}};
}

}  // namespace

std::string_view kind_name(const Model& model) {
    switch (model.index()) {
        case 0: return "hmm";
        case 1: return "hqmm";
        default: return "open_system";
    }
}

Model parse_model_text(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        parse_fail(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) parse_fail("model file must be a JSON object");
    const json& version = field(doc, "format_version", "model file");
    if (!version.is_string() || version.get<std::string>() != kFormatVersion) {
        parse_fail("unsupported format_version (expected \"1\")");
    }
    const std::string kind = read_symbol(field(doc, "kind", "model file"), "kind");
    for (const char* other : {"hmm", "hqmm", "open_system"}) {
        if (kind != other && doc.contains(other)) {
            parse_fail("model file of kind \"" + kind + "\" also carries a \"" + other + "\" body");
        }
    }
    try {
        if (kind == "hmm") return parse_hmm(field(doc, "hmm", "model file"));
        if (kind == "hqmm") return parse_hqmm(field(doc, "hqmm", "model file"));
        if (kind == "open_system") return parse_open_system(field(doc, "open_system", "model file"));
    } catch (const json::exception& e) {
        parse_fail(std::string("malformed model body: ") + e.what());
    }
    parse_fail("unknown kind \"" + kind + "\"");
}

LoadedModel load_model(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    return LoadedModel{parse_model_text(bytes), "sha256:" + sha256_hex(bytes)};
}

std::string serialize_model(const Model& model) {
    json doc = {{"format_version", kFormatVersion}, {"kind", kind_name(model)}};
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Hmm>) doc["hmm"] = hmm_json(m);
            else if constexpr (std::is_same_v<T, Hqmm>) doc["hqmm"] = hqmm_json(m);
            else doc["open_system"] = open_system_json(m);
        },
        model);
    return doc.dump(2) + "\n";
}

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorKind::NumericFailure, "SHA-256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += kHex[digest[i] >> 4];
        out += kHex[digest[i] & 0xF];
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw Error(ErrorKind::Io, "failed reading " + path.string());
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

}  // namespace hqmm
