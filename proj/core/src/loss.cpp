#include "slimnet/loss.hpp"
#include "slimnet/errors.hpp"

#include <cmath>
#include <string>

namespace slimnet {

double pair_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw DimensionError("descriptor lengths differ: " +
                             std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()));
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!std::isfinite(a[i]) || !std::isfinite(b[i]))
            throw InputError("non-finite descriptor value");
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

namespace {

void validate(const PairBatch& batch) {
    if (batch.size() == 0)
        throw UsageError("empty pair batch");
    if (batch.a.size() != batch.size() || batch.b.size() != batch.size())
        throw StructuralError("pair batch arrays have different lengths");
    if (!(batch.margin > 0.0))
        throw UsageError("margin must be positive");
    for (int y : batch.labels) {
        if (y != 0 && y != 1)
            throw UsageError("pair label must be 0 or 1, got " + std::to_string(y));
    }
}

} // namespace

double contrastive_loss(const PairBatch& batch) {
    validate(batch);
    const std::size_t n = batch.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = pair_distance(batch.a[i], batch.b[i]);
        if (batch.labels[i] == 1) {
            sum += d * d;
        } else {
            const double slack = std::max(batch.margin - d, 0.0);
            sum += slack * slack;
        }
    }
    return sum / (2.0 * double(n));
}

std::vector<PairGrad> loss_grad(const PairBatch& batch) {
    validate(batch);
    const std::size_t n = batch.size();
    const double inv_n = 1.0 / double(n);

    std::vector<PairGrad> grads(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = batch.a[i];
        const auto& b = batch.b[i];
        const double d = pair_distance(a, b);
        const std::size_t dim = a.size();

        PairGrad& g = grads[i];
        g.da.assign(dim, 0.0);
        g.db.assign(dim, 0.0);

        double coeff = 0.0;
        if (batch.labels[i] == 1) {
            // d/da of d^2/(2N) = (a - b)/N
            coeff = inv_n;
        } else if (d < batch.margin && d > 0.0) {
            // d/da of max(m - d, 0)^2/(2N) = -(m - d)/(N d) * (a - b)
            coeff = -(batch.margin - d) / (double(n) * d);
        }
        // Non-match at d == 0 and non-match at d >= margin both stay zero.

        if (coeff != 0.0) {
            for (std::size_t k = 0; k < dim; ++k) {
                const double diff = a[k] - b[k];
                g.da[k] = coeff * diff;
                g.db[k] = -coeff * diff;
            }
        }
    }
    return grads;
}

} // namespace slimnet
