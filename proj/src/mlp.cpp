#include "dhf/mlp.hpp"

#include <cmath>

#include "dhf/errors.hpp"
#include "dhf/parallel.hpp"
#include "dhf/rng.hpp"

namespace dhf {

void MlpParams::validate() const {
    if (hidden.empty()) throw InvalidSpecError("mlp: need at least one hidden layer");
    for (int h : hidden)
        if (h < 1) throw InvalidSpecError("mlp: hidden widths must be >= 1");
    if (epochs < 1) throw InvalidSpecError("mlp: epochs must be >= 1");
    if (batch < 1) throw InvalidSpecError("mlp: batch must be >= 1");
    if (!(learning_rate > 0.0)) throw InvalidSpecError("mlp: learning_rate must be > 0");
}

namespace {

// forward pass keeping pre-activations for backprop
struct ForwardTrace {
    std::vector<std::vector<double>> pre;  // per layer, before ReLU / identity
    std::vector<std::vector<double>> post; // after activation; post[0] is input
};

double forward(const MlpModel& model, const double* row, ForwardTrace* trace) {
    const std::size_t n_layers = model.layers.size();
    std::vector<double> cur(row, row + model.input_dim());
    if (trace) {
        trace->pre.assign(n_layers, {});
        trace->post.assign(n_layers + 1, {});
        trace->post[0] = cur;
    }
    for (std::size_t l = 0; l < n_layers; ++l) {
        const MlpLayer& layer = model.layers[l];
        const bool last = l + 1 == n_layers;
        std::vector<double> next(layer.weights.rows());
        for (std::size_t o = 0; o < layer.weights.rows(); ++o) {
            double v = layer.bias[o];
            const double* w = layer.weights.row(o);
            for (std::size_t i = 0; i < layer.weights.cols(); ++i) v += w[i] * cur[i];
            next[o] = v;
        }
        if (trace) trace->pre[l] = next;
        if (!last)
            for (double& v : next) v = v > 0.0 ? v : 0.0; // ReLU
        if (trace) trace->post[l + 1] = next;
        cur = std::move(next);
    }
    return cur[0];
}

} // namespace

double MlpModel::predict_row(const double* row) const {
    return forward(*this, row, nullptr);
}

MlpModel make_mlp(std::size_t input_dim, const MlpParams& params, std::uint64_t seed) {
    params.validate();
    if (input_dim == 0) throw InvalidSpecError("mlp: input_dim must be >= 1");

    std::vector<std::size_t> widths;
    widths.push_back(input_dim);
    for (int h : params.hidden) widths.push_back(static_cast<std::size_t>(h));
    widths.push_back(1);

    Rng rng(mix_seed(seed, 0xA11));
    MlpModel model;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        MlpLayer layer;
        layer.weights = Matrix(widths[l + 1], widths[l]);
        layer.bias.assign(widths[l + 1], 0.0);
        const double limit = std::sqrt(6.0 / static_cast<double>(widths[l]));
        for (std::size_t o = 0; o < widths[l + 1]; ++o)
            for (std::size_t i = 0; i < widths[l]; ++i)
                layer.weights(o, i) = rng.uniform(-limit, limit);
        model.layers.push_back(std::move(layer));
    }
    return model;
}

double mlp_sample_loss(const MlpModel& model, const double* row, double target) {
    const double pred = forward(model, row, nullptr);
    return (pred - target) * (pred - target);
}

MlpGradients mlp_zero_gradients(const MlpModel& model) {
    MlpGradients g;
    for (const MlpLayer& layer : model.layers) {
        g.dw.emplace_back(layer.weights.rows(), layer.weights.cols());
        g.db.emplace_back(layer.bias.size(), 0.0);
    }
    return g;
}

double mlp_backprop(const MlpModel& model, const double* row, double target,
                    MlpGradients& grads) {
    ForwardTrace trace;
    const double pred = forward(model, row, &trace);
    const std::size_t n_layers = model.layers.size();

    // d loss / d output for loss (pred - y)^2
    std::vector<double> delta = {2.0 * (pred - target)};

    for (std::size_t l = n_layers; l-- > 0;) {
        const MlpLayer& layer = model.layers[l];
        const std::vector<double>& input = trace.post[l];
        for (std::size_t o = 0; o < layer.weights.rows(); ++o) {
            grads.db[l][o] += delta[o];
            double* dw = grads.dw[l].row(o);
            for (std::size_t i = 0; i < layer.weights.cols(); ++i)
                dw[i] += delta[o] * input[i];
        }
        if (l == 0) break;
        std::vector<double> prev(layer.weights.cols(), 0.0);
        for (std::size_t i = 0; i < layer.weights.cols(); ++i) {
            double s = 0.0;
            for (std::size_t o = 0; o < layer.weights.rows(); ++o)
                s += delta[o] * layer.weights(o, i);
            // ReLU derivative on the previous layer's pre-activation; 0 at the kink
            prev[i] = trace.pre[l - 1][i] > 0.0 ? s : 0.0;
        }
        delta = std::move(prev);
    }
    return pred;
}

MlpModel fit_mlp(const Matrix& x, const std::vector<double>& y, const MlpParams& params,
                 std::uint64_t seed) {
    if (x.rows() == 0) throw InvalidSpecError("mlp: empty training set");
    if (x.rows() != y.size()) throw LengthMismatchError("mlp: rows vs targets");

    MlpModel model = make_mlp(x.cols(), params, seed);
    Rng rng(mix_seed(seed, 0xB22));

    std::vector<std::size_t> order(x.rows());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    MlpGradients grads = mlp_zero_gradients(model);
    for (int epoch = 0; epoch < params.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(params.batch)) {
            const std::size_t stop =
                std::min(order.size(), start + static_cast<std::size_t>(params.batch));
            const double batch_n = static_cast<double>(stop - start);

            for (Matrix& m : grads.dw) std::fill(m.data().begin(), m.data().end(), 0.0);
            for (auto& b : grads.db) std::fill(b.begin(), b.end(), 0.0);

            for (std::size_t k = start; k < stop; ++k) {
                const std::size_t r = order[k];
                const double pred = mlp_backprop(model, x.row(r), y[r], grads);
                epoch_loss += (pred - y[r]) * (pred - y[r]);
            }

            const double step = params.learning_rate / batch_n;
            for (std::size_t l = 0; l < model.layers.size(); ++l) {
                MlpLayer& layer = model.layers[l];
                for (std::size_t i = 0; i < layer.weights.data().size(); ++i)
                    layer.weights.data()[i] -= step * grads.dw[l].data()[i];
                for (std::size_t o = 0; o < layer.bias.size(); ++o)
                    layer.bias[o] -= step * grads.db[l][o];
            }
        }
        if (!std::isfinite(epoch_loss))
            throw NonFiniteError("mlp: training loss diverged at epoch " +
                                 std::to_string(epoch + 1));
    }
    return model;
}

std::vector<double> mlp_predict_serial(const MlpModel& model, const Matrix& x) {
    std::vector<double> out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) out[r] = model.predict_row(x.row(r));
    return out;
}

std::vector<double> mlp_predict(const MlpModel& model, const Matrix& x, int jobs) {
    if (par::resolve_jobs(jobs) <= 1) return mlp_predict_serial(model, x);
    std::vector<double> out(x.rows());
    par::for_each_index_parallel(x.rows(), jobs,
                                 [&](std::size_t r) { out[r] = model.predict_row(x.row(r)); });
    return out;
}

} // namespace dhf
