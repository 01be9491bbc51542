#pragma once

// JSON wire formats. Rationals travel as "p/q" strings so round trips are
// bit-exact; enclosures as {"lo","hi"} objects. Piecewise functions use
//   {"pieces":[{"lo":"p/q","hi":"p/q","coeffs":["a0","a1","a2"]}]}
// Key order is fixed (ordered_json) so identical inputs serialize to
// identical bytes.

#include <string>

#include <json.hpp>

#include "rical/enclosure.hpp"
#include "rical/norms.hpp"
#include "rical/piecewise.hpp"
#include "rical/rational.hpp"
#include "rical/witness.hpp"

namespace rical {

using Json = nlohmann::ordered_json;

inline Json to_json(const Rational& r) { return Json(r.str()); }

inline Rational rational_from_json(const Json& j) {
    if (!j.is_string()) throw std::invalid_argument("rational_from_json: expected string");
    return Rational::parse(j.get<std::string>());
}

inline Json to_json(const Enclosure& e) {
    Json j;
    j["lo"] = e.lo.str();
    j["hi"] = e.hi.str();
    return j;
}

inline Enclosure enclosure_from_json(const Json& j) {
    return Enclosure(rational_from_json(j.at("lo")), rational_from_json(j.at("hi")));
}

inline Json to_json(const PiecewisePoly& f) {
    Json pieces = Json::array();
    for (const auto& pc : f.pieces()) {
        Json jp;
        jp["lo"] = pc.lo.str();
        jp["hi"] = pc.hi.str();
        Json coeffs = Json::array();
        for (int i = 0; i < 3; ++i) {
            Rational c = i < static_cast<int>(pc.p.size()) ? pc.p[static_cast<size_t>(i)] : Rational(0);
            coeffs.push_back(c.str());
        }
        jp["coeffs"] = coeffs;
        pieces.push_back(jp);
    }
    Json j;
    j["pieces"] = pieces;
    return j;
}

inline PiecewisePoly piecewise_from_json(const Json& j) {
    std::vector<Piece> pieces;
    for (const auto& jp : j.at("pieces")) {
        Piece pc;
        pc.lo = rational_from_json(jp.at("lo"));
        pc.hi = rational_from_json(jp.at("hi"));
        for (const auto& c : jp.at("coeffs")) pc.p.push_back(rational_from_json(c));
        pieces.push_back(std::move(pc));
    }
    return PiecewisePoly::from_pieces(std::move(pieces));
}

inline Json to_json(const StepFunction& s) { return to_json(s.to_piecewise()); }

inline StepFunction step_from_json(const Json& j) {
    return StepFunction::from_piecewise(piecewise_from_json(j));
}

// Norm descriptors:
//   {"kind":"l1"} | {"kind":"linf"}
//   {"kind":"lorentz","P":"p/q","p":"p/q"|"inf"}
//   {"kind":"orlicz","family":"power"|"power-log"|"exp-power","alpha":"p/q","beta":"p/q"}
//   {"kind":"cl-product","X":{...},"Y":{...},"theta":"p/q"}
inline Json to_json(const NormDescriptor& d) {
    Json j;
    switch (d.kind) {
        case NormDescriptor::Kind::L1: j["kind"] = "l1"; break;
        case NormDescriptor::Kind::Linf: j["kind"] = "linf"; break;
        case NormDescriptor::Kind::Lorentz:
            j["kind"] = "lorentz";
            j["P"] = d.lorentz->P.str();
            j["p"] = d.lorentz->p ? Json(d.lorentz->p->str()) : Json("inf");
            break;
        case NormDescriptor::Kind::Orlicz: {
            j["kind"] = "orlicz";
            const auto& y = *d.orlicz;
            switch (y.family) {
                case YoungFunction::Family::Power: j["family"] = "power"; break;
                case YoungFunction::Family::PowerLog: j["family"] = "power-log"; break;
                case YoungFunction::Family::ExpPower: j["family"] = "exp-power"; break;
            }
            j["alpha"] = y.alpha.str();
            j["beta"] = y.beta.str();
            break;
        }
        case NormDescriptor::Kind::CLProduct:
            j["kind"] = "cl-product";
            j["X"] = to_json(*d.cl->X);
            j["Y"] = to_json(*d.cl->Y);
            j["theta"] = d.cl->theta.str();
            break;
    }
    return j;
}

// Witness families serialize through the piecewise schema plus a metadata
// block: {"family":"lan"|"mount_filip","params":{...},"u":...,"u1":...,"u2":...}
// and {"family":"bounded"|"refined","params":{...},"eta":...,...} with the
// coefficient lists and step envelopes alongside.
inline Json to_json(const BumpTriple& b, const std::string& family) {
    Json j;
    j["family"] = family;
    j["params"]["alpha"] = b.alpha.str();
    j["u"] = to_json(b.u);
    j["u1"] = to_json(b.u1);
    j["u2"] = to_json(b.u2);
    return j;
}

inline BumpTriple bump_from_json(const Json& j) {
    BumpTriple b;
    b.alpha = rational_from_json(j.at("params").at("alpha"));
    b.u = piecewise_from_json(j.at("u"));
    b.u1 = piecewise_from_json(j.at("u1"));
    b.u2 = piecewise_from_json(j.at("u2"));
    b.validate_derivatives();
    return b;
}

inline Json to_json(const OptimalityWitness& w, const std::string& family) {
    Json j;
    j["family"] = family;
    j["params"]["n"] = w.refine;
    Json a = Json::array(), b = Json::array(), c = Json::array();
    for (const auto& v : w.a) a.push_back(v.str());
    for (const auto& v : w.b) b.push_back(v.str());
    for (const auto& v : w.c) c.push_back(v.str());
    j["params"]["a"] = a;
    j["params"]["b"] = b;
    j["params"]["c"] = c;
    j["eta"] = to_json(w.eta);
    j["eta1"] = to_json(w.eta1);
    j["eta2"] = to_json(w.eta2);
    j["g"] = to_json(w.g);
    j["h"] = to_json(w.h);
    j["f"] = to_json(w.f);
    return j;
}

inline NormDescriptor descriptor_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "l1") return NormDescriptor::l1();
    if (kind == "linf") return NormDescriptor::linf();
    if (kind == "lorentz") {
        std::optional<Rational> p;
        if (j.at("p").get<std::string>() != "inf") p = rational_from_json(j.at("p"));
        return NormDescriptor::make_lorentz(LorentzParams(rational_from_json(j.at("P")), p));
    }
    if (kind == "orlicz") {
        const std::string fam = j.at("family").get<std::string>();
        Rational alpha = rational_from_json(j.at("alpha"));
        Rational beta = j.contains("beta") ? rational_from_json(j.at("beta")) : Rational(0);
        if (fam == "power") return NormDescriptor::make_orlicz(YoungFunction::power(alpha));
        if (fam == "power-log") return NormDescriptor::make_orlicz(YoungFunction::power_log(alpha, beta));
        if (fam == "exp-power") return NormDescriptor::make_orlicz(YoungFunction::exp_power(alpha));
        throw std::invalid_argument("descriptor_from_json: unknown orlicz family '" + fam + "'");
    }
    if (kind == "cl-product") {
        return NormDescriptor::cl_product(descriptor_from_json(j.at("X")), descriptor_from_json(j.at("Y")),
                                          rational_from_json(j.at("theta")));
    }
    throw std::invalid_argument("descriptor_from_json: unknown kind '" + kind + "'");
}

}  // namespace rical
