#pragma once

// JSON encodings. Matrices: {"rows": r, "cols": c, "data": [[re, im], ...]} row-major.
// Objects use insertion-ordered keys so identical inputs dump to identical bytes.

#include <string>

#include <json.hpp>

#include "qosc/hopfstar.hpp"
#include "qosc/repbuild.hpp"
#include "qosc/report.hpp"
#include "qosc/sumap.hpp"

namespace qosc {

using json = nlohmann::ordered_json;

inline json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx complex_from_json(const json& j)
{
    if (!j.is_array() || j.size() != 2) throw Error("complex value must be [re, im]");
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

inline json matrix_to_json(const Matrix& m)
{
    json data = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(complex_to_json(m(i, j)));
    json out;
    out["rows"] = m.rows();
    out["cols"] = m.cols();
    out["data"] = std::move(data);
    return out;
}

inline Matrix matrix_from_json(const json& j)
{
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const json& data = j.at("data");
    if (rows < 0 || cols < 0 || data.size() != std::size_t(rows * cols))
        throw Error("matrix data length does not match rows*cols");
    Matrix m(rows, cols);
    std::size_t idx = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = complex_from_json(data.at(idx++));
    return m;
}

inline json params_to_json(const QParams& p)
{
    json out;
    out["mode"] = std::string(to_string(p.mode));
    out["epsilon"] = p.epsilon;
    out["l"] = p.l;
    out["q"] = complex_to_json(p.q);
    out["sqrt_q"] = complex_to_json(p.sqrt_q);
    out["gamma"] = complex_to_json(p.gamma);
    return out;
}

inline QParams params_from_json(const json& j)
{
    return make_params(parse_mode(j.at("mode").get<std::string>()), j.at("epsilon").get<double>(),
                       j.at("l").get<int>());
}

inline json rep_to_json(const Rep& rep)
{
    json out;
    out["params"] = params_to_json(rep.params);
    out["k"] = rep.k;
    out["dim"] = rep.dim();
    out["nu0"] = complex_to_json(rep.nu0);
    out["lambda0"] = complex_to_json(rep.lambda0);
    json lambdas = json::array();
    for (cplx l : rep.lambdas) lambdas.push_back(complex_to_json(l));
    out["lambdas"] = std::move(lambdas);
    out["normalized"] = rep.normalized;
    out["window"] = rep.window;
    out["definite"] = rep.definite;
    out["A"] = matrix_to_json(rep.A);
    out["Abar"] = matrix_to_json(rep.Abar);
    out["N"] = matrix_to_json(rep.Nmat);
    return out;
}

inline Rep rep_from_json(const json& j)
{
    Rep rep;
    rep.params = params_from_json(j.at("params"));
    rep.k = j.at("k").get<int>();
    rep.nu0 = complex_from_json(j.at("nu0"));
    rep.lambda0 = complex_from_json(j.at("lambda0"));
    for (const auto& l : j.at("lambdas")) rep.lambdas.push_back(complex_from_json(l));
    rep.normalized = j.at("normalized").get<bool>();
    rep.window = j.at("window").get<bool>();
    rep.definite = j.at("definite").get<bool>();
    rep.A = matrix_from_json(j.at("A"));
    rep.Abar = matrix_from_json(j.at("Abar"));
    rep.Nmat = matrix_from_json(j.at("N"));
    const Eigen::Index d = rep.A.rows();
    for (const Matrix* m : {&rep.A, &rep.Abar, &rep.Nmat})
        if (m->rows() != d || m->cols() != d) throw Error("representation matrices must be square of equal size");
    return rep;
}

inline json report_to_json(const CheckReport& r)
{
    json out;
    out["name"] = r.name;
    out["residual"] = r.residual;
    out["tolerance"] = r.tolerance;
    out["pass"] = r.pass;
    if (r.detail) out["detail"] = *r.detail;
    return out;
}

inline json involution_to_json(const InvolutionSpec& inv)
{
    json out;
    out["alpha"] = complex_to_json(inv.alpha);
    out["beta"] = complex_to_json(inv.beta);
    out["eta"] = complex_to_json(inv.eta);
    out["flavor"] = std::string(to_string(inv.flavor));
    out["label"] = inv.label;
    return out;
}

inline InvolutionSpec involution_from_json(const json& j)
{
    const std::string flavor = j.at("flavor").get<std::string>();
    if (flavor != "standard" && flavor != "nonstandard") throw Error("flavor must be standard|nonstandard");
    return make_involution(complex_from_json(j.at("alpha")), complex_from_json(j.at("beta")),
                           complex_from_json(j.at("eta")),
                           flavor == "standard" ? Flavor::Standard : Flavor::NonStandard,
                           j.value("label", std::string{}));
}

inline json su_triple_to_json(const SuTriple& t)
{
    json out;
    out["j"] = t.j;
    out["Q"] = complex_to_json(t.Q);
    out["Jp"] = matrix_to_json(t.Jp);
    out["Jm"] = matrix_to_json(t.Jm);
    out["J0"] = matrix_to_json(t.J0);
    return out;
}

} // namespace qosc
