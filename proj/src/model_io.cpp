#include "segrisk/model_io.hpp"

#include <fstream>
#include <stdexcept>

namespace segrisk {

namespace {

using nlohmann::json;

Matrix matrix_from_json(const json& j, const char* what) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument(std::string(what) + " must be a non-empty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.at(0).size());
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& row = j.at(static_cast<std::size_t>(i));
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw std::invalid_argument(std::string(what) + " rows must all have " + std::to_string(cols) + " entries");
        for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
    }
    return m;
}

Vector vector_from_json(const json& j, const char* what) {
    if (!j.is_array()) throw std::invalid_argument(std::string(what) + " must be an array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    return v;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

}  // namespace

HmmModel model_from_json(const json& doc) {
    try {
        const int states = doc.at("states").get<int>();
        Matrix transition = matrix_from_json(doc.at("transition"), "transition");
        if (transition.rows() != states)
            throw std::invalid_argument("\"states\" disagrees with the transition matrix size");

        const auto& em = doc.at("emission");
        const auto type = em.at("type").get<std::string>();
        EmissionFamily emission;
        if (type == "categorical") {
            emission = CategoricalEmission{matrix_from_json(em.at("probs"), "emission.probs")};
        } else if (type == "gaussian") {
            emission = GaussianEmission{vector_from_json(em.at("means"), "emission.means"),
                                        vector_from_json(em.at("stds"), "emission.stds")};
        } else {
            throw std::invalid_argument("unknown emission type \"" + type + "\"");
        }

        const json initial = doc.contains("initial") ? doc.at("initial") : json("stationary");
        if (initial.is_string()) {
            if (initial.get<std::string>() != "stationary")
                throw std::invalid_argument("initial must be an array or \"stationary\"");
            return make_model(std::move(transition), std::move(emission));
        }
        return make_model(std::move(transition), vector_from_json(initial, "initial"), std::move(emission));
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed model JSON: ") + e.what());
    }
}

json model_to_json(const HmmModel& model) {
    json doc;
    doc["states"] = model.num_states();
    doc["transition"] = matrix_to_json(model.transition);
    if (model.stationary_initial) doc["initial"] = "stationary";
    else doc["initial"] = vector_to_json(model.initial);
    if (const auto* cat = std::get_if<CategoricalEmission>(&model.emission)) {
        doc["emission"] = {{"type", "categorical"}, {"probs", matrix_to_json(cat->probs)}};
    } else {
        const auto& g = std::get<GaussianEmission>(model.emission);
        doc["emission"] = {{"type", "gaussian"}, {"means", vector_to_json(g.means)}, {"stds", vector_to_json(g.stds)}};
    }
    return doc;
}

HmmModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw std::invalid_argument("malformed model JSON in " + path.string() + ": " + e.what());
    }
    return model_from_json(doc);
}

void save_model(const HmmModel& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << model_to_json(model).dump(2) << '\n';
}

}  // namespace segrisk
