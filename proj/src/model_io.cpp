#include "ratapprox/model_io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "ratapprox/error.hpp"

namespace ratapprox {

using nlohmann::json;

Complex evaluate(const RationalModel& model, Complex s)
{
    return std::visit(
        [s](const auto& m) -> Complex {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, loewner::StateSpaceModel>) {
                return loewner::eval_state_space(m, s);
            } else if constexpr (std::is_same_v<T, aaa::BarycentricModel>) {
                return aaa::eval_barycentric(m, s);
            } else {
                return vf::eval_pole_residue(m, s);
            }
        },
        model);
}

PolesZeros poles_zeros(const RationalModel& model)
{
    return std::visit(
        [](const auto& m) -> PolesZeros {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, loewner::StateSpaceModel>) {
                return {loewner::poles(m), loewner::zeros(m)};
            } else if constexpr (std::is_same_v<T, aaa::BarycentricModel>) {
                return aaa::barycentric_poles_zeros(m);
            } else {
                return vf::pr_poles_zeros(m);
            }
        },
        model);
}

std::size_t model_order(const RationalModel& model)
{
    return std::visit([](const auto& m) { return m.order(); }, model);
}

std::string_view model_type(const RationalModel& model)
{
    switch (model.index()) {
    case 0: return "state_space";
    case 1: return "barycentric";
    default: return "pole_residue";
    }
}

namespace {

json pair(Complex c) { return json::array({c.real(), c.imag()}); }

Complex unpair(const json& j)
{
    if (!j.is_array() || j.size() != 2) {
        throw Error(ErrorKind::io, "model JSON: expected [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

template <class Vec>
json list(const Vec& v)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(v.size()); ++i) {
        out.push_back(pair(v[static_cast<std::size_t>(i)]));
    }
    return out;
}

json matrix(const ComplexMatrix& M)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            row.push_back(pair(M(i, j)));
        }
        out.push_back(row);
    }
    return out;
}

std::vector<Complex> unlist(const json& j, const char* key)
{
    if (!j.contains(key) || !j[key].is_array()) {
        throw Error(ErrorKind::io, std::string("model JSON: missing array '") + key + "'");
    }
    std::vector<Complex> out;
    for (const auto& e : j[key]) {
        out.push_back(unpair(e));
    }
    return out;
}

ComplexMatrix unmatrix(const json& j, const char* key, Eigen::Index rows, Eigen::Index cols)
{
    if (!j.contains(key) || !j[key].is_array() || static_cast<Eigen::Index>(j[key].size()) != rows) {
        throw Error(ErrorKind::io, std::string("model JSON: bad matrix '") + key + "'");
    }
    ComplexMatrix M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& row = j[key][static_cast<std::size_t>(i)];
        if (static_cast<Eigen::Index>(row.size()) != cols) {
            throw Error(ErrorKind::io, std::string("model JSON: ragged matrix '") + key + "'");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            M(i, c) = unpair(row[static_cast<std::size_t>(c)]);
        }
    }
    return M;
}

} // namespace

std::string model_to_json(const RationalModel& model, const std::string& meta_json)
{
    json j;
    j["type"] = std::string(model_type(model));
    j["order"] = model_order(model);
    if (const auto* ss = std::get_if<loewner::StateSpaceModel>(&model)) {
        j["E"] = matrix(ss->E);
        j["A"] = matrix(ss->A);
        json b = json::array();
        for (Eigen::Index i = 0; i < ss->B.size(); ++i) {
            b.push_back(pair(ss->B(i)));
        }
        json c = json::array();
        for (Eigen::Index i = 0; i < ss->C.size(); ++i) {
            c.push_back(pair(ss->C(i)));
        }
        j["B"] = b;
        j["C"] = c;
        j["e_condition"] = ss->e_condition;
    } else if (const auto* bm = std::get_if<aaa::BarycentricModel>(&model)) {
        j["support"] = list(bm->support);
        j["values"] = list(bm->values);
        j["weights"] = list(bm->weights);
        j["real_symmetric"] = bm->real_symmetric;
    } else {
        const auto& pr = std::get<vf::PoleResidueModel>(model);
        j["poles"] = list(pr.poles);
        j["residues"] = list(pr.residues);
        j["d"] = pr.d;
        j["h"] = pr.h;
    }
    try {
        j["meta"] = json::parse(meta_json);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::invalid_argument, std::string("model meta is not valid JSON: ") + e.what());
    }
    return j.dump(1) + "\n";
}

RationalModel model_from_json(std::string_view text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::io, std::string("model JSON: ") + e.what());
    }
    try {
        const std::string type = j.at("type").get<std::string>();
        if (type == "state_space") {
            const auto r = static_cast<Eigen::Index>(j.at("order").get<std::size_t>());
            loewner::StateSpaceModel m;
            m.E = unmatrix(j, "E", r, r);
            m.A = unmatrix(j, "A", r, r);
            const auto b = unlist(j, "B");
            const auto c = unlist(j, "C");
            if (static_cast<Eigen::Index>(b.size()) != r || static_cast<Eigen::Index>(c.size()) != r) {
                throw Error(ErrorKind::io, "model JSON: B/C length differs from order");
            }
            m.B = Eigen::Map<const ComplexVector>(b.data(), r);
            m.C = Eigen::Map<const ComplexRowVector>(c.data(), r);
            m.e_condition = j.value("e_condition", 0.0);
            return m;
        }
        if (type == "barycentric") {
            aaa::BarycentricModel m;
            m.support = unlist(j, "support");
            m.values = unlist(j, "values");
            m.weights = unlist(j, "weights");
            m.real_symmetric = j.value("real_symmetric", false);
            if (m.values.size() != m.support.size() || m.weights.size() != m.support.size() || m.support.empty()) {
                throw Error(ErrorKind::io, "model JSON: support/values/weights lengths differ");
            }
            return m;
        }
        if (type == "pole_residue") {
            vf::PoleResidueModel m;
            m.poles = unlist(j, "poles");
            m.residues = unlist(j, "residues");
            m.d = j.at("d").get<double>();
            m.h = j.at("h").get<double>();
            if (m.poles.size() != m.residues.size()) {
                throw Error(ErrorKind::io, "model JSON: poles/residues lengths differ");
            }
            return m;
        }
        throw Error(ErrorKind::io, "model JSON: unknown type '" + type + "'");
    } catch (const json::exception& e) {
        throw Error(ErrorKind::io, std::string("model JSON: ") + e.what());
    }
}

void write_model(const std::string& path, const RationalModel& model, const std::string& meta_json)
{
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorKind::io, "cannot open '" + path + "' for writing");
    }
    out << model_to_json(model, meta_json);
}

RationalModel read_model(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::io, "cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return model_from_json(buf.str());
}

void write_singular_values_csv(std::ostream& os, const RealVector& sigma, std::string_view metadata)
{
    if (!metadata.empty()) {
        os << "# " << metadata << '\n';
    }
    os << "index,sigma,sigma_normalized\n";
    const auto old = os.precision(17);
    const double s1 = sigma.size() > 0 ? sigma(0) : 0.0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        os << i + 1 << ',' << sigma(i) << ',' << (s1 > 0.0 ? sigma(i) / s1 : 0.0) << '\n';
    }
    os.precision(old);
}

} // namespace ratapprox
