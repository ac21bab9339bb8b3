// Copyright 2026 The NCQF Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ncqf/scenario.hpp"

#include <cmath>
#include <set>

#include "ncqf/errors.hpp"
#include "ncqf/magic.hpp"

namespace ncqf {

using nlohmann::json;

namespace {

constexpr int kMaxQubits = 6;

std::string at(const std::string &path, const std::string &key) {
    return path.empty() ? key : path + "." + key;
}

std::string at(const std::string &path, size_t index) {
    return path + "[" + std::to_string(index) + "]";
}

const json &require(const json &j, const std::string &key, const std::string &path) {
    if (!j.is_object()) {
        throw ValidationError(path, "expected an object");
    }
    auto it = j.find(key);
    if (it == j.end()) {
        throw ValidationError(at(path, key), "missing required field");
    }
    return *it;
}

double as_number(const json &j, const std::string &path) {
    if (!j.is_number()) {
        throw ValidationError(path, "expected a number");
    }
    double v = j.get<double>();
    if (!std::isfinite(v)) {
        throw ValidationError(path, "must be finite");
    }
    return v;
}

int as_int(const json &j, const std::string &path) {
    if (!j.is_number_integer()) {
        throw ValidationError(path, "expected an integer");
    }
    return j.get<int>();
}

std::string as_string(const json &j, const std::string &path) {
    if (!j.is_string()) {
        throw ValidationError(path, "expected a string");
    }
    return j.get<std::string>();
}

bool as_bool(const json &j, const std::string &path) {
    if (!j.is_boolean()) {
        throw ValidationError(path, "expected a boolean");
    }
    return j.get<bool>();
}

double number_or(const json &j, const std::string &key, const std::string &path, double fallback) {
    auto it = j.find(key);
    return it == j.end() ? fallback : as_number(*it, at(path, key));
}

std::string string_or(const json &j, const std::string &key, const std::string &path, const std::string &fallback) {
    auto it = j.find(key);
    return it == j.end() ? fallback : as_string(*it, at(path, key));
}

void reject_unknown(const json &j, const std::set<std::string> &allowed, const std::string &path) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw ValidationError(at(path, it.key()), "unknown field");
        }
    }
}

json coeff_json(cplx c) {
    if (c.imag() == 0.0) {
        return c.real();
    }
    return json::array({c.real(), c.imag()});
}

cplx parse_coeff(const json &j, const std::string &path) {
    if (j.is_number()) {
        return {as_number(j, path), 0.0};
    }
    if (j.is_array() && j.size() == 2) {
        return {as_number(j[0], at(path, size_t{0})), as_number(j[1], at(path, size_t{1}))};
    }
    throw ValidationError(path, "expected a number or a [re, im] pair");
}

json op_json(const OperatorSpec &op) {
    json terms = json::array();
    for (const auto &t : op.terms) {
        terms.push_back({{"op", t.ops}, {"coeff", coeff_json(t.coeff)}});
    }
    return terms;
}

OperatorSpec parse_op(const json &j, const std::string &path) {
    OperatorSpec op;
    if (j.is_string()) {
        op.terms.push_back({1.0, j.get<std::string>()});
        return op;
    }
    if (!j.is_array() || j.empty()) {
        throw ValidationError(path, "expected an operator string or a non-empty list of terms");
    }
    for (size_t k = 0; k < j.size(); k++) {
        std::string p = at(path, k);
        const json &t = j[k];
        if (!t.is_object()) {
            throw ValidationError(p, "expected a term object");
        }
        reject_unknown(t, {"op", "coeff"}, p);
        OperatorSpec::Term term;
        term.ops = as_string(require(t, "op", p), at(p, "op"));
        if (t.contains("coeff")) {
            term.coeff = parse_coeff(t["coeff"], at(p, "coeff"));
        }
        op.terms.push_back(term);
    }
    return op;
}

void check_op(const OperatorSpec &op, int qubits, const std::string &path) {
    static const std::string symbols = "IXYZ-+eg";
    for (size_t k = 0; k < op.terms.size(); k++) {
        const std::string &s = op.terms[k].ops;
        std::string p = at(at(path, k), "op");
        if (static_cast<int>(s.size()) != qubits) {
            throw ValidationError(p, "operator string length must equal the number of qubits");
        }
        for (char c : s) {
            if (symbols.find(c) == std::string::npos) {
                throw ValidationError(p, std::string("unknown operator symbol '") + c + "'");
            }
        }
    }
}

json feedback_json(const FeedbackSpec &f) {
    json j = {{"kind", f.kind}};
    if (f.kind == "fixed") {
        j["omega"] = op_json(f.omega);
    } else if (f.kind == "eigenbasis") {
        j["omega_max"] = f.omega_max;
        j["rank_tol"] = f.rank_tol;
        j["degeneracy_tol"] = f.degeneracy_tol;
        j["support_phase"] = f.support_phase;
    } else if (f.kind == "restricted") {
        json thetas = json::array();
        for (const auto &t : f.thetas) {
            thetas.push_back(op_json(t));
        }
        j["thetas"] = thetas;
        j["mode"] = f.mode;
    } else if (f.kind == "population") {
        j["target"] = f.target;
        j["omega_psi"] = f.omega_psi;
    }
    return j;
}

FeedbackSpec parse_feedback(const json &j, const std::string &path) {
    FeedbackSpec f;
    f.kind = as_string(require(j, "kind", path), at(path, "kind"));
    if (f.kind == "none" || f.kind == "basic") {
        reject_unknown(j, {"kind"}, path);
    } else if (f.kind == "fixed") {
        reject_unknown(j, {"kind", "omega"}, path);
        f.omega = parse_op(require(j, "omega", path), at(path, "omega"));
    } else if (f.kind == "eigenbasis") {
        reject_unknown(j, {"kind", "omega_max", "rank_tol", "degeneracy_tol", "support_phase"}, path);
        f.omega_max = number_or(j, "omega_max", path, f.omega_max);
        f.rank_tol = number_or(j, "rank_tol", path, f.rank_tol);
        f.degeneracy_tol = number_or(j, "degeneracy_tol", path, f.degeneracy_tol);
        f.support_phase = number_or(j, "support_phase", path, f.support_phase);
        if (!(f.omega_max > 0.0)) {
            throw ValidationError(at(path, "omega_max"), "must be positive");
        }
        if (!(f.rank_tol > 0.0)) {
            throw ValidationError(at(path, "rank_tol"), "must be positive");
        }
        if (!(f.degeneracy_tol > 0.0)) {
            throw ValidationError(at(path, "degeneracy_tol"), "must be positive");
        }
    } else if (f.kind == "restricted") {
        reject_unknown(j, {"kind", "thetas", "mode"}, path);
        const json &t = require(j, "thetas", path);
        if (!t.is_array() || t.empty()) {
            throw ValidationError(at(path, "thetas"), "expected a non-empty list of operators");
        }
        for (size_t k = 0; k < t.size(); k++) {
            f.thetas.push_back(parse_op(t[k], at(at(path, "thetas"), k)));
        }
        f.mode = string_or(j, "mode", path, "scalar");
        if (f.mode != "scalar" && f.mode != "multi") {
            throw ValidationError(at(path, "mode"), "expected 'scalar' or 'multi'");
        }
        if (f.mode == "scalar" && f.thetas.size() != 1) {
            throw ValidationError(at(path, "thetas"), "scalar mode takes exactly one operator");
        }
    } else if (f.kind == "population") {
        reject_unknown(j, {"kind", "target", "omega_psi"}, path);
        f.target = as_string(require(j, "target", path), at(path, "target"));
        f.omega_psi = number_or(j, "omega_psi", path, 0.0);
    } else {
        throw ValidationError(at(path, "kind"), "unknown feedback kind '" + f.kind + "'");
    }
    return f;
}

json initial_json(const InitialStateSpec &s) {
    json j = {{"kind", s.kind}};
    if (s.kind == "basis") {
        j["bits"] = s.bits;
    } else if (s.kind == "bloch") {
        j["vectors"] = s.bloch;
    } else if (s.kind == "magic") {
        j["eps"] = s.eps;
    } else if (s.kind == "named") {
        j["name"] = s.name;
    }
    return j;
}

InitialStateSpec parse_initial(const json &j, const std::string &path) {
    InitialStateSpec s;
    s.kind = as_string(require(j, "kind", path), at(path, "kind"));
    if (s.kind == "plus") {
        reject_unknown(j, {"kind"}, path);
    } else if (s.kind == "basis") {
        reject_unknown(j, {"kind", "bits"}, path);
        s.bits = as_string(require(j, "bits", path), at(path, "bits"));
    } else if (s.kind == "bloch") {
        reject_unknown(j, {"kind", "vectors"}, path);
        const json &v = require(j, "vectors", path);
        if (!v.is_array() || v.empty()) {
            throw ValidationError(at(path, "vectors"), "expected a list of Bloch vectors");
        }
        for (size_t k = 0; k < v.size(); k++) {
            std::string p = at(at(path, "vectors"), k);
            if (!v[k].is_array() || v[k].size() != 3) {
                throw ValidationError(p, "expected [x, y, z]");
            }
            std::array<double, 3> r{};
            for (size_t a = 0; a < 3; a++) {
                r[a] = as_number(v[k][a], at(p, a));
            }
            s.bloch.push_back(r);
        }
    } else if (s.kind == "magic") {
        reject_unknown(j, {"kind", "eps"}, path);
        s.eps = as_number(require(j, "eps", path), at(path, "eps"));
        if (!(s.eps >= 0.0 && s.eps <= 0.5)) {
            throw ValidationError(at(path, "eps"), "must lie in [0, 0.5]");
        }
    } else if (s.kind == "named") {
        reject_unknown(j, {"kind", "name"}, path);
        s.name = as_string(require(j, "name", path), at(path, "name"));
    } else {
        throw ValidationError(at(path, "kind"), "unknown initial state kind '" + s.kind + "'");
    }
    return s;
}

}  // namespace

OperatorSpec OperatorSpec::single(std::string ops, cplx coeff) {
    OperatorSpec s;
    s.terms.push_back({coeff, std::move(ops)});
    return s;
}

OperatorSpec &OperatorSpec::add(std::string ops, cplx coeff) {
    terms.push_back({coeff, std::move(ops)});
    return *this;
}

OperatorSpec OperatorSpec::scaled(cplx factor) const {
    OperatorSpec s = *this;
    for (auto &t : s.terms) {
        t.coeff *= factor;
    }
    return s;
}

Operator OperatorSpec::build(int num_qubits) const {
    const int n = 1 << num_qubits;
    Operator out = Operator::Zero(n, n);
    for (const auto &t : terms) {
        if (static_cast<int>(t.ops.size()) != num_qubits) {
            throw ValidationError("", "operator string '" + t.ops + "' does not match the qubit count");
        }
        out += t.coeff * product_operator(t.ops);
    }
    return out;
}

long long ScenarioConfig::num_steps() const {
    return std::llround(duration / dt);
}

json to_json(const ScenarioConfig &c) {
    json channels = json::array();
    for (const auto &ch : c.channels) {
        channels.push_back({{"label", ch.label}, {"eta", ch.eta}, {"operator", op_json(ch.op)}});
    }
    json feedback = json::array();
    for (const auto &f : c.feedback) {
        feedback.push_back(feedback_json(f));
    }
    json j = {
        {"name", c.name},
        {"description", c.description},
        {"qubits", c.qubits},
        {"duration", c.duration},
        {"dt", c.dt},
        {"integrator", integrator_name(c.integrator)},
        {"channels", channels},
        {"feedback", feedback},
        {"initial", initial_json(c.initial)},
        {"observables", c.observables},
        {"observable_stride", c.observable_stride},
        {"track_spectrum", c.track_spectrum},
    };
    if (!c.omega.empty()) {
        j["omega"] = op_json(c.omega);
    }
    if (c.trigger) {
        j["trigger"] = {{"observable", c.trigger->observable},
                        {"threshold", c.trigger->threshold},
                        {"omega", op_json(c.trigger->omega)}};
    }
    if (c.postselect) {
        j["postselect"] = {{"observable", c.postselect->observable}, {"threshold", c.postselect->threshold}};
    }
    return j;
}

ScenarioConfig scenario_from_json(const json &j) {
    const std::string root;
    if (!j.is_object()) {
        throw ValidationError("", "scenario must be a JSON object");
    }
    reject_unknown(j,
                   {"name", "description", "qubits", "duration", "dt", "integrator", "channels", "feedback", "initial",
                    "omega", "trigger", "observables", "postselect", "observable_stride", "track_spectrum"},
                   root);
    ScenarioConfig c;
    c.name = as_string(require(j, "name", root), "name");
    c.description = string_or(j, "description", root, "");
    c.qubits = as_int(require(j, "qubits", root), "qubits");
    c.duration = as_number(require(j, "duration", root), "duration");
    c.dt = as_number(require(j, "dt", root), "dt");
    c.integrator = parse_integrator(string_or(j, "integrator", root, "kraus"));

    const json &channels = require(j, "channels", root);
    if (!channels.is_array()) {
        throw ValidationError("channels", "expected a list");
    }
    for (size_t k = 0; k < channels.size(); k++) {
        std::string p = at("channels", k);
        const json &ch = channels[k];
        if (!ch.is_object()) {
            throw ValidationError(p, "expected a channel object");
        }
        reject_unknown(ch, {"label", "eta", "operator"}, p);
        ChannelSpec spec;
        spec.label = as_string(require(ch, "label", p), at(p, "label"));
        spec.eta = number_or(ch, "eta", p, 1.0);
        spec.op = parse_op(require(ch, "operator", p), at(p, "operator"));
        c.channels.push_back(spec);
    }

    const json &feedback = require(j, "feedback", root);
    if (!feedback.is_array()) {
        throw ValidationError("feedback", "expected a list");
    }
    for (size_t k = 0; k < feedback.size(); k++) {
        c.feedback.push_back(parse_feedback(feedback[k], at("feedback", k)));
    }

    c.initial = parse_initial(require(j, "initial", root), "initial");
    if (j.contains("omega")) {
        c.omega = parse_op(j["omega"], "omega");
    }
    if (j.contains("trigger")) {
        const json &t = j["trigger"];
        if (!t.is_object()) {
            throw ValidationError("trigger", "expected an object");
        }
        reject_unknown(t, {"observable", "threshold", "omega"}, "trigger");
        TriggerSpec ts;
        ts.observable = as_string(require(t, "observable", "trigger"), "trigger.observable");
        ts.threshold = as_number(require(t, "threshold", "trigger"), "trigger.threshold");
        ts.omega = parse_op(require(t, "omega", "trigger"), "trigger.omega");
        c.trigger = ts;
    }
    if (j.contains("observables")) {
        const json &o = j["observables"];
        if (!o.is_array()) {
            throw ValidationError("observables", "expected a list of names");
        }
        for (size_t k = 0; k < o.size(); k++) {
            c.observables.push_back(as_string(o[k], at("observables", k)));
        }
    }
    if (j.contains("postselect")) {
        const json &p = j["postselect"];
        if (!p.is_object()) {
            throw ValidationError("postselect", "expected an object");
        }
        reject_unknown(p, {"observable", "threshold"}, "postselect");
        PostselectSpec ps;
        ps.observable = as_string(require(p, "observable", "postselect"), "postselect.observable");
        ps.threshold = as_number(require(p, "threshold", "postselect"), "postselect.threshold");
        c.postselect = ps;
    }
    if (j.contains("observable_stride")) {
        c.observable_stride = as_int(j["observable_stride"], "observable_stride");
    }
    if (j.contains("track_spectrum")) {
        c.track_spectrum = as_bool(j["track_spectrum"], "track_spectrum");
    }
    validate(c);
    materialize(c);
    return c;
}

void validate(const ScenarioConfig &c) {
    if (c.name.empty()) {
        throw ValidationError("name", "must not be empty");
    }
    if (c.qubits < 1 || c.qubits > kMaxQubits) {
        throw ValidationError("qubits", "must lie in [1, " + std::to_string(kMaxQubits) + "]");
    }
    if (!(c.duration >= 0.0) || !std::isfinite(c.duration)) {
        throw ValidationError("duration", "must be non-negative and finite");
    }
    if (!(c.dt > 0.0) || (c.duration > 0.0 && c.dt > c.duration)) {
        throw ValidationError("dt", "must be positive and not exceed duration");
    }
    if (c.channels.empty()) {
        throw ValidationError("channels", "at least one measurement channel is required");
    }
    std::set<std::string> labels;
    for (size_t k = 0; k < c.channels.size(); k++) {
        const auto &ch = c.channels[k];
        std::string p = at("channels", k);
        if (ch.label.empty() || !labels.insert(ch.label).second) {
            throw ValidationError(at(p, "label"), "labels must be non-empty and unique");
        }
        if (!(ch.eta > 0.0 && ch.eta <= 1.0)) {
            throw ValidationError(at(p, "eta"), "must lie in (0, 1]");
        }
        if (ch.op.empty()) {
            throw ValidationError(at(p, "operator"), "must not be empty");
        }
        check_op(ch.op, c.qubits, at(p, "operator"));
    }
    if (c.feedback.size() != c.channels.size()) {
        throw ValidationError("feedback", "one feedback law per channel is required");
    }
    for (size_t k = 0; k < c.feedback.size(); k++) {
        const auto &f = c.feedback[k];
        std::string p = at("feedback", k);
        if (f.kind == "fixed") {
            check_op(f.omega, c.qubits, at(p, "omega"));
        }
        for (size_t t = 0; t < f.thetas.size(); t++) {
            check_op(f.thetas[t], c.qubits, at(at(p, "thetas"), t));
        }
    }
    if (!c.omega.empty()) {
        check_op(c.omega, c.qubits, "omega");
    }
    if (c.trigger) {
        check_op(c.trigger->omega, c.qubits, "trigger.omega");
    }
    if (c.observable_stride < 1) {
        throw ValidationError("observable_stride", "must be at least 1");
    }
    const auto &init = c.initial;
    if (init.kind == "basis" && static_cast<int>(init.bits.size()) != c.qubits) {
        throw ValidationError("initial.bits", "length must equal the number of qubits");
    }
    if (init.kind == "bloch") {
        if (static_cast<int>(init.bloch.size()) != c.qubits) {
            throw ValidationError("initial.vectors", "one Bloch vector per qubit is required");
        }
        for (size_t k = 0; k < init.bloch.size(); k++) {
            const auto &r = init.bloch[k];
            if (std::hypot(r[0], r[1], r[2]) > 1.0 + 1e-12) {
                throw ValidationError(at("initial.vectors", k), "Bloch vector longer than 1");
            }
        }
    }
    if (init.kind == "magic" && c.qubits != 5) {
        throw ValidationError("initial.kind", "magic input requires five qubits");
    }
}

Ket named_ket(const std::string &name, int num_qubits) {
    auto need = [&](int q) {
        if (num_qubits != q) {
            throw ValidationError("", "ket '" + name + "' requires " + std::to_string(q) + " qubits");
        }
    };
    if (name == "Phi+" || name == "Phi-" || name == "Psi+" || name == "Psi-") {
        need(2);
        if (name == "Phi+") {
            return bell::phi_plus();
        }
        if (name == "Phi-") {
            return bell::phi_minus();
        }
        if (name == "Psi+") {
            return bell::psi_plus();
        }
        return bell::psi_minus();
    }
    if (name == "plus") {
        Ket k = Ket::Ones(1 << num_qubits);
        return k / k.norm();
    }
    if (name == "ghz_full") {
        need(4);
        return (basis_ket("eeee") - basis_ket("gggg")) / std::sqrt(2.0);
    }
    if (name == "ghz_half") {
        need(4);
        Ket pp = kron(Ket(basis_ket("eg") + basis_ket("ge")), Ket(basis_ket("eg") + basis_ket("ge")));
        return std::sqrt(3.0 / 8.0) * (basis_ket("eeee") + basis_ket("gggg")) -
               (basis_ket("eegg") + basis_ket("ggee") + pp) / std::sqrt(24.0);
    }
    if (name == "F1L") {
        need(5);
        return msd::logical_f1();
    }
    if (name == "F0L") {
        need(5);
        return msd::logical_f0();
    }
    if (!name.empty() && name.find_first_not_of("eg") == std::string::npos) {
        need(static_cast<int>(name.size()));
        return basis_ket(name);
    }
    throw ValidationError("", "unknown ket '" + name + "'");
}

namespace {

const MeasurementChannel &find_channel(const ObservableContext &ctx, const std::string &label, size_t *index) {
    if (ctx.channels != nullptr) {
        for (size_t k = 0; k < ctx.channels->size(); k++) {
            if ((*ctx.channels)[k].label == label) {
                *index = k;
                return (*ctx.channels)[k];
            }
        }
    }
    throw ValidationError("", "no channel labelled '" + label + "'");
}

}  // namespace

Observable make_observable(const std::string &name, int num_qubits, const ObservableContext &ctx) {
    auto need = [&](int q) {
        if (num_qubits != q) {
            throw ValidationError("", "observable '" + name + "' requires " + std::to_string(q) + " qubits");
        }
    };
    auto prefixed = [&](const std::string &prefix, std::string *rest) {
        if (name.rfind(prefix, 0) == 0) {
            *rest = name.substr(prefix.size());
            return true;
        }
        return false;
    };
    std::string rest;
    if (name == "concurrence") {
        need(2);
        return {name, [](const QuantumState &s) { return concurrence(s); }};
    }
    if (name == "purity") {
        return {name, [](const QuantumState &s) { return s.purity(); }};
    }
    if (name == "lambda_max") {
        return {name, [](const QuantumState &s) { return s.eig().values(0); }};
    }
    if (name == "bell_max") {
        need(2);
        std::array<Ket, 4> kets = {bell::phi_plus(), bell::phi_minus(), bell::psi_plus(), bell::psi_minus()};
        return {name, [kets](const QuantumState &s) {
                    double best = 0.0;
                    for (const auto &k : kets) {
                        best = std::max(best, fidelity(s, k));
                    }
                    return best;
                }};
    }
    if (prefixed("fid:", &rest)) {
        Ket k = named_ket(rest, num_qubits);
        return {name, [k](const QuantumState &s) { return fidelity(s, k); }};
    }
    if (prefixed("fid_h:", &rest)) {
        Ket k = hadamard_n(num_qubits) * named_ket(rest, num_qubits);
        return {name, [k](const QuantumState &s) { return fidelity(s, k); }};
    }
    if (prefixed("expect:", &rest)) {
        need(static_cast<int>(rest.size()));
        Operator p = pauli_string(rest);
        return {name, [p](const QuantumState &s) { return expect(s.rho(), p).real(); }};
    }
    if (prefixed("signal:", &rest)) {
        size_t idx = 0;
        MeasurementChannel ch = find_channel(ctx, rest, &idx);
        return {name, [ch](const QuantumState &s) { return signal(s, ch); }};
    }
    if (prefixed("variance:", &rest)) {
        size_t idx = 0;
        MeasurementChannel ch = find_channel(ctx, rest, &idx);
        Operator x = split_xy(ch.L).first;
        Operator x2 = x * x;
        return {name, [x, x2](const QuantumState &s) {
                    double m = expect(s.rho(), x).real();
                    return expect(s.rho(), x2).real() - m * m;
                }};
    }
    if (prefixed("noise:", &rest)) {
        size_t idx = 0;
        MeasurementChannel ch = find_channel(ctx, rest, &idx);
        if (ctx.laws == nullptr || idx >= ctx.laws->size()) {
            throw ValidationError("", "observable '" + name + "' needs the channel's feedback law");
        }
        FeedbackLaw law = (*ctx.laws)[idx];
        return {name, [ch, law](const QuantumState &s) {
                    try {
                        Operator w = synthesize(law, s, ch);
                        return noise_magnitude(s, ch, w).total;
                    } catch (const PreconditionError &) {
                        return std::numeric_limits<double>::quiet_NaN();
                    }
                }};
    }
    if (name == "bloch_x" || name == "bloch_y" || name == "bloch_z" || name == "bloch_r") {
        need(1);
        char axis = name.back();
        return {name, [axis](const QuantumState &s) {
                    double x = expect(s.rho(), ops::sigma_x()).real();
                    double y = expect(s.rho(), ops::sigma_y()).real();
                    double z = expect(s.rho(), ops::sigma_z()).real();
                    switch (axis) {
                        case 'x':
                            return x;
                        case 'y':
                            return y;
                        case 'z':
                            return z;
                        default:
                            return std::sqrt(x * x + y * y + z * z);
                    }
                }};
    }
    if (name == "stab_sum") {
        need(5);
        return {name, [](const QuantumState &s) { return msd::stabilizer_sum(s); }};
    }
    if (name == "code_weight") {
        need(5);
        return {name, [](const QuantumState &s) { return msd::decode(s).code_weight; }};
    }
    if (name == "eps_out") {
        need(5);
        return {name, [](const QuantumState &s) { return msd::decode(s).eps_out; }};
    }
    throw ValidationError("", "unknown observable '" + name + "'");
}

QuantumState build_initial_state(const InitialStateSpec &spec, int num_qubits) {
    if (spec.kind == "plus") {
        return QuantumState::from_ket(named_ket("plus", num_qubits));
    }
    if (spec.kind == "basis") {
        if (static_cast<int>(spec.bits.size()) != num_qubits) {
            throw ValidationError("initial.bits", "length must equal the number of qubits");
        }
        return QuantumState::from_ket(basis_ket(spec.bits));
    }
    if (spec.kind == "bloch") {
        std::vector<QuantumState> factors;
        for (const auto &r : spec.bloch) {
            Operator rho = (ops::identity(2) + r[0] * ops::sigma_x() + r[1] * ops::sigma_y() + r[2] * ops::sigma_z()) * 0.5;
            factors.emplace_back(rho);
        }
        return product_state(factors);
    }
    if (spec.kind == "magic") {
        return msd::noisy_input(spec.eps);
    }
    if (spec.kind == "named") {
        return QuantumState::from_ket(named_ket(spec.name, num_qubits));
    }
    throw ValidationError("initial.kind", "unknown initial state kind '" + spec.kind + "'");
}

FeedbackLaw build_feedback(const FeedbackSpec &spec, int num_qubits) {
    if (spec.kind == "none") {
        return NoFeedback{};
    }
    if (spec.kind == "fixed") {
        Operator w = spec.omega.build(num_qubits);
        if (!is_hermitian(w, 1e-10)) {
            throw ValidationError("omega", "fixed feedback operator must be Hermitian");
        }
        return FixedFeedback{w};
    }
    if (spec.kind == "basic") {
        return BasicFeedback{};
    }
    if (spec.kind == "eigenbasis") {
        EigenbasisFeedback f;
        f.params.omega_max = spec.omega_max;
        f.params.rank_tol = spec.rank_tol;
        f.params.degeneracy_tol = spec.degeneracy_tol;
        f.params.support_phase = spec.support_phase;
        return f;
    }
    if (spec.kind == "restricted") {
        RestrictedFeedback f;
        f.mode = spec.mode == "multi" ? RestrictedFeedback::Mode::multi : RestrictedFeedback::Mode::scalar;
        for (const auto &t : spec.thetas) {
            Operator th = t.build(num_qubits);
            if (!is_hermitian(th, 1e-10)) {
                throw ValidationError("thetas", "control directions must be Hermitian");
            }
            f.thetas.push_back(th);
        }
        return f;
    }
    if (spec.kind == "population") {
        PopulationFeedback f;
        f.target_projector = projector(named_ket(spec.target, num_qubits));
        f.omega_psi = spec.omega_psi;
        return f;
    }
    throw ValidationError("kind", "unknown feedback kind '" + spec.kind + "'");
}

Scenario materialize(const ScenarioConfig &config) {
    validate(config);
    Scenario s;
    s.config = config;
    const int q = config.qubits;
    for (size_t k = 0; k < config.channels.size(); k++) {
        const auto &ch = config.channels[k];
        s.channels.push_back({ch.label, ch.op.build(q), ch.eta});
    }
    for (size_t k = 0; k < config.feedback.size(); k++) {
        try {
            s.laws.push_back(build_feedback(config.feedback[k], q));
        } catch (const ValidationError &e) {
            throw ValidationError(at(at("feedback", k), e.field.empty() ? "kind" : e.field), e.what());
        }
    }
    try {
        s.initial = build_initial_state(config.initial, q);
    } catch (const ValidationError &e) {
        throw ValidationError(e.field.empty() ? "initial" : e.field, e.what());
    }
    if (!config.omega.empty()) {
        s.omega = config.omega.build(q);
        if (!is_hermitian(s.omega, 1e-10)) {
            throw ValidationError("omega", "open-loop Hamiltonian must be Hermitian");
        }
    }
    ObservableContext ctx{&s.channels, &s.laws};
    for (size_t k = 0; k < config.observables.size(); k++) {
        try {
            s.observables.push_back(make_observable(config.observables[k], q, ctx));
        } catch (const ValidationError &e) {
            throw ValidationError(at("observables", k), e.what());
        }
    }
    if (config.trigger) {
        try {
            s.trigger_observable = make_observable(config.trigger->observable, q, ctx);
        } catch (const ValidationError &e) {
            throw ValidationError("trigger.observable", e.what());
        }
        s.trigger_omega = config.trigger->omega.build(q);
        if (!is_hermitian(s.trigger_omega, 1e-10)) {
            throw ValidationError("trigger.omega", "must be Hermitian");
        }
    }
    if (config.postselect) {
        try {
            s.postselect_observable = make_observable(config.postselect->observable, q, ctx);
        } catch (const ValidationError &e) {
            throw ValidationError("postselect.observable", e.what());
        }
    }
    s.initial.eig();
    return s;
}

}  // namespace ncqf
