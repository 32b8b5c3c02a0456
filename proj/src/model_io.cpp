#include "dhf/model_io.hpp"

#include <fstream>
#include <sstream>

#include "dhf/csv.hpp"
#include "dhf/errors.hpp"

namespace dhf {

namespace {

void put(std::ostream& os, double v) { os << ' ' << csv::format_double(v); }

std::string expect(std::istream& is, const char* what) {
    std::string tok;
    if (!(is >> tok)) throw ParseError(std::string("model: unexpected end, wanted ") + what);
    return tok;
}

void expect_keyword(std::istream& is, const std::string& kw) {
    const std::string tok = expect(is, kw.c_str());
    if (tok != kw) throw ParseError("model: expected '" + kw + "', got '" + tok + "'");
}

double read_double(std::istream& is) { return csv::parse_double(expect(is, "number")); }

long long read_int(std::istream& is) {
    const std::string tok = expect(is, "integer");
    try {
        return std::stoll(tok);
    } catch (const std::exception&) {
        throw ParseError("model: expected integer, got '" + tok + "'");
    }
}

} // namespace

void save_model(const ExpertModel& model, std::ostream& os) {
    const ExpertSpec& spec = model.spec;
    os << "dhf-model 1\n";
    os << "name " << spec.name << '\n';
    os << "family " << to_string(spec.family) << '\n';
    os << "feature_kind " << to_string(spec.feature_kind) << '\n';
    os << "seed " << spec.rng_seed << '\n';

    os << "params";
    switch (spec.family) {
        case ExpertFamily::LinearRegression:
            break;
        case ExpertFamily::ExtraTrees: {
            const auto& p = std::get<EtrParams>(spec.params);
            os << ' ' << p.n_trees << ' ' << p.min_leaf << ' ' << p.min_split << ' '
               << p.k_features;
            break;
        }
        case ExpertFamily::NeuralNet: {
            const auto& p = std::get<MlpParams>(spec.params);
            os << ' ' << p.hidden.size();
            for (int h : p.hidden) os << ' ' << h;
            os << ' ' << p.epochs << ' ' << p.batch;
            put(os, p.learning_rate);
            break;
        }
        case ExpertFamily::SupportVector: {
            const auto& p = std::get<SvrParams>(spec.params);
            put(os, p.c);
            put(os, p.gamma);
            put(os, p.epsilon);
            put(os, p.tol);
            os << ' ' << p.max_passes;
            put(os, p.cache_mb);
            break;
        }
    }
    os << '\n';

    if (model.standardizer) {
        os << "standardizer " << model.standardizer->mean.size() << '\n';
        for (double v : model.standardizer->mean) put(os, v);
        os << '\n';
        for (double v : model.standardizer->scale) put(os, v);
        os << '\n';
    }
    if (model.target_scaler) {
        os << "target_scaler";
        put(os, model.target_scaler->mean);
        put(os, model.target_scaler->scale);
        os << '\n';
    }

    if (model.linear) {
        os << "linear " << model.linear->coef.size() << '\n';
        put(os, model.linear->intercept);
        for (double v : model.linear->coef) put(os, v);
        os << '\n';
    } else if (model.forest) {
        os << "forest " << model.forest->trees.size() << '\n';
        for (const Tree& t : model.forest->trees) {
            os << "tree " << t.nodes.size() << '\n';
            for (const TreeNode& n : t.nodes) {
                os << n.feature;
                put(os, n.threshold);
                os << ' ' << n.left << ' ' << n.right;
                put(os, n.value);
                os << '\n';
            }
        }
    } else if (model.mlp) {
        os << "mlp " << model.mlp->layers.size() << '\n';
        for (const MlpLayer& layer : model.mlp->layers) {
            os << "layer " << layer.weights.rows() << ' ' << layer.weights.cols() << '\n';
            for (std::size_t o = 0; o < layer.weights.rows(); ++o) {
                for (std::size_t i = 0; i < layer.weights.cols(); ++i)
                    put(os, layer.weights(o, i));
                os << '\n';
            }
            for (double b : layer.bias) put(os, b);
            os << '\n';
        }
    } else if (model.svr) {
        os << "svr " << model.svr->beta.size() << ' ' << model.svr->support.cols();
        put(os, model.svr->gamma);
        put(os, model.svr->bias);
        os << '\n';
        for (double b : model.svr->beta) put(os, b);
        os << '\n';
        for (std::size_t r = 0; r < model.svr->support.rows(); ++r) {
            for (std::size_t c = 0; c < model.svr->support.cols(); ++c)
                put(os, model.svr->support(r, c));
            os << '\n';
        }
    } else {
        throw InvalidSpecError("model '" + spec.name + "' has no fitted state to save");
    }
    os << "end\n";
}

void save_model_file(const ExpertModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path + "'");
    save_model(model, out);
    if (!out) throw IoError("write failed for '" + path + "'");
}

ExpertModel load_model(std::istream& is) {
    expect_keyword(is, "dhf-model");
    if (read_int(is) != 1) throw ParseError("model: unsupported version");

    ExpertModel model;
    ExpertSpec& spec = model.spec;
    expect_keyword(is, "name");
    spec.name = expect(is, "name");
    expect_keyword(is, "family");
    spec.family = expert_family_from_string(expect(is, "family"));
    expect_keyword(is, "feature_kind");
    spec.feature_kind = feature_set_from_string(expect(is, "feature kind"));
    expect_keyword(is, "seed");
    spec.rng_seed = static_cast<std::uint64_t>(read_int(is));

    expect_keyword(is, "params");
    switch (spec.family) {
        case ExpertFamily::LinearRegression:
            spec.params = LinearParams{};
            break;
        case ExpertFamily::ExtraTrees: {
            EtrParams p;
            p.n_trees = static_cast<int>(read_int(is));
            p.min_leaf = static_cast<int>(read_int(is));
            p.min_split = static_cast<int>(read_int(is));
            p.k_features = static_cast<int>(read_int(is));
            spec.params = p;
            break;
        }
        case ExpertFamily::NeuralNet: {
            MlpParams p;
            p.hidden.resize(static_cast<std::size_t>(read_int(is)));
            for (int& h : p.hidden) h = static_cast<int>(read_int(is));
            p.epochs = static_cast<int>(read_int(is));
            p.batch = static_cast<int>(read_int(is));
            p.learning_rate = read_double(is);
            spec.params = p;
            break;
        }
        case ExpertFamily::SupportVector: {
            SvrParams p;
            p.c = read_double(is);
            p.gamma = read_double(is);
            p.epsilon = read_double(is);
            p.tol = read_double(is);
            p.max_passes = read_int(is);
            p.cache_mb = read_double(is);
            spec.params = p;
            break;
        }
    }

    std::string section = expect(is, "section");
    if (section == "standardizer") {
        Standardizer s;
        const std::size_t d = static_cast<std::size_t>(read_int(is));
        s.mean.resize(d);
        s.scale.resize(d);
        for (double& v : s.mean) v = read_double(is);
        for (double& v : s.scale) v = read_double(is);
        model.standardizer = std::move(s);
        section = expect(is, "section");
    }
    if (section == "target_scaler") {
        TargetScaler t;
        t.mean = read_double(is);
        t.scale = read_double(is);
        model.target_scaler = t;
        section = expect(is, "section");
    }

    if (section == "linear") {
        LinearModel lm;
        lm.coef.resize(static_cast<std::size_t>(read_int(is)));
        lm.intercept = read_double(is);
        for (double& v : lm.coef) v = read_double(is);
        model.linear = std::move(lm);
    } else if (section == "forest") {
        ExtraTreesModel fm;
        fm.trees.resize(static_cast<std::size_t>(read_int(is)));
        for (Tree& t : fm.trees) {
            expect_keyword(is, "tree");
            t.nodes.resize(static_cast<std::size_t>(read_int(is)));
            for (TreeNode& n : t.nodes) {
                n.feature = static_cast<int>(read_int(is));
                n.threshold = read_double(is);
                n.left = static_cast<int>(read_int(is));
                n.right = static_cast<int>(read_int(is));
                n.value = read_double(is);
            }
        }
        model.forest = std::move(fm);
    } else if (section == "mlp") {
        MlpModel mm;
        mm.layers.resize(static_cast<std::size_t>(read_int(is)));
        for (MlpLayer& layer : mm.layers) {
            expect_keyword(is, "layer");
            const std::size_t out = static_cast<std::size_t>(read_int(is));
            const std::size_t in = static_cast<std::size_t>(read_int(is));
            layer.weights = Matrix(out, in);
            for (std::size_t o = 0; o < out; ++o)
                for (std::size_t i = 0; i < in; ++i) layer.weights(o, i) = read_double(is);
            layer.bias.resize(out);
            for (double& b : layer.bias) b = read_double(is);
        }
        model.mlp = std::move(mm);
    } else if (section == "svr") {
        SvrModel sm;
        const std::size_t n_sv = static_cast<std::size_t>(read_int(is));
        const std::size_t d = static_cast<std::size_t>(read_int(is));
        sm.gamma = read_double(is);
        sm.bias = read_double(is);
        sm.beta.resize(n_sv);
        for (double& b : sm.beta) b = read_double(is);
        sm.support = Matrix(n_sv, d);
        for (std::size_t r = 0; r < n_sv; ++r)
            for (std::size_t c = 0; c < d; ++c) sm.support(r, c) = read_double(is);
        model.svr = std::move(sm);
    } else {
        throw ParseError("model: unknown section '" + section + "'");
    }

    expect_keyword(is, "end");
    return model;
}

ExpertModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return load_model(in);
}

} // namespace dhf
