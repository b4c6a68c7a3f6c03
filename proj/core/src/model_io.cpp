#include <fstream>
#include <optional>

#include <json.hpp>

#include "esn/errors.hpp"
#include "esn/model.hpp"
#include "io_util.hpp"

namespace esn {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", m.entries()}};
}

Matrix matrix_from_json(const json& j) {
    return Matrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                  j.at("entries").get<std::vector<double>>());
}

}  // namespace

void save_model(const std::string& path, const EsnModel& model) {
    const auto& c = model.config();
    json doc{
        {"config",
         {{"n_s", c.n_s},
          {"n_a", c.n_a},
          {"n_b", c.n_b},
          {"init_low", c.init_low},
          {"init_high", c.init_high},
          {"alpha", c.alpha},
          {"gamma", c.gamma},
          {"washout", c.washout},
          {"seed", c.seed}}},
        {"w_in", matrix_to_json(model.w_in())},
        {"w_r", matrix_to_json(model.w_r())},
        {"w_r_initial", matrix_to_json(model.w_r_initial())},
        {"w_out", model.trained() ? matrix_to_json(model.w_out()) : json(nullptr)},
    };
    detail::atomic_write(path, [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
}

EsnModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    json doc;
    try {
        in >> doc;
        const json& jc = doc.at("config");
        ReservoirConfig c;
        c.n_s = jc.at("n_s").get<std::size_t>();
        c.n_a = jc.at("n_a").get<std::size_t>();
        c.n_b = jc.at("n_b").get<std::size_t>();
        c.init_low = jc.at("init_low").get<double>();
        c.init_high = jc.at("init_high").get<double>();
        c.alpha = jc.at("alpha").get<double>();
        c.gamma = jc.at("gamma").get<double>();
        c.washout = jc.at("washout").get<std::size_t>();
        c.seed = jc.at("seed").get<std::uint64_t>();
        std::optional<Matrix> w_out;
        if (!doc.at("w_out").is_null()) {
            w_out = matrix_from_json(doc.at("w_out"));
        }
        return EsnModel::from_parts(c, matrix_from_json(doc.at("w_in")),
                                    matrix_from_json(doc.at("w_r_initial")), std::move(w_out));
    } catch (const json::exception& e) {
        throw ParameterError(path + ": malformed model document: " + e.what());
    }
}

}  // namespace esn
