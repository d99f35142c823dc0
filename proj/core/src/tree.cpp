#include "gradecast/tree.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

#include "gradecast/error.hpp"

namespace gradecast {
namespace {

struct NodeStats {
    double weight = 0.0;
    double count0 = 0.0;
    double count1 = 0.0;
    double sum = 0.0;
};

struct PendingNode {
    int id;
    std::size_t start;
    std::size_t end;
    int depth;
};

double gini_from_counts(double c0, double c1, double w) {
    const double p0 = c0 / w;
    const double p1 = c1 / w;
    return 1.0 - p0 * p0 - p1 * p1;
}

}  // namespace

double impurity(std::span<const double> values, Task task) {
    if (values.empty()) throw Error(ErrorCode::EmptyNode, "impurity of an empty node");
    const auto n = static_cast<double>(values.size());
    if (task == Task::Classification) {
        std::map<double, std::size_t> counts;
        for (double v : values) ++counts[v];
        double sum_sq = 0.0;
        for (const auto& [label, count] : counts) {
            const double p = static_cast<double>(count) / n;
            sum_sq += p * p;
        }
        return 1.0 - sum_sq;
    }
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return ss / n;
}

SortedColumns SortedColumns::build(const Eigen::MatrixXd& X) {
    SortedColumns s;
    const auto n = static_cast<std::uint32_t>(X.rows());
    s.order.resize(static_cast<std::size_t>(X.cols()));
    for (Eigen::Index f = 0; f < X.cols(); ++f) {
        auto& ord = s.order[static_cast<std::size_t>(f)];
        ord.resize(n);
        std::iota(ord.begin(), ord.end(), std::uint32_t{0});
        std::sort(ord.begin(), ord.end(), [&](std::uint32_t a, std::uint32_t b) {
            const double xa = X(a, f), xb = X(b, f);
            return xa < xb || (xa == xb && a < b);
        });
    }
    return s;
}

const TreeNode& TreeModel::leaf_for(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    if (static_cast<std::size_t>(x.size()) != n_features)
        throw Error(ErrorCode::FeatureCountMismatch, "tree expects " + std::to_string(n_features) + " features, got " +
                                                         std::to_string(x.size()));
    std::size_t i = 0;
    while (!nodes[i].is_leaf()) {
        const auto& node = nodes[i];
        i = static_cast<std::size_t>(x(node.feature) <= node.threshold ? node.left : node.right);
    }
    return nodes[i];
}

double TreeModel::predict_one(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    const auto& leaf = leaf_for(x);
    return task == Task::Classification ? leaf.value[1] : leaf.value[0];
}

int TreeModel::depth() const {
    if (nodes.empty()) return 0;
    std::vector<int> d(nodes.size(), 0);
    int best = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        // children always have larger indices than their parent
        if (nodes[i].is_leaf()) {
            best = std::max(best, d[i]);
            continue;
        }
        d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
        d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
    }
    return best;
}

std::vector<double> TreeModel::feature_importances() const {
    std::vector<double> imp(n_features, 0.0);
    for (const auto& node : nodes) {
        if (node.is_leaf()) continue;
        const auto& l = nodes[static_cast<std::size_t>(node.left)];
        const auto& r = nodes[static_cast<std::size_t>(node.right)];
        const double decrease = node.weight * node.impurity - l.weight * l.impurity - r.weight * r.impurity;
        imp[static_cast<std::size_t>(node.feature)] += std::max(0.0, decrease);
    }
    const double total = std::accumulate(imp.begin(), imp.end(), 0.0);
    if (total > 0.0)
        for (auto& v : imp) v /= total;
    return imp;
}

TreeModel fit_tree(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, Task task, const Hyperparameters& hp,
                   const TreeFitOptions& options) {
    const auto n = static_cast<std::size_t>(X.rows());
    const auto p = static_cast<std::size_t>(X.cols());
    if (n == 0 || p == 0) throw Error(ErrorCode::DegenerateDesign, "tree fit on an empty design matrix");
    if (static_cast<std::size_t>(y.size()) != n) throw Error(ErrorCode::LengthMismatch, "design rows and target length differ");
    if (!options.row_weights.empty() && options.row_weights.size() != n)
        throw Error(ErrorCode::LengthMismatch, "row weight count differs from row count");
    if (task == Task::Classification)
        for (std::size_t r = 0; r < n; ++r)
            if (y(static_cast<Eigen::Index>(r)) != 0.0 && y(static_cast<Eigen::Index>(r)) != 1.0)
                throw Error(ErrorCode::NonBinaryLabels, "classification tree labels must be 0 or 1");

    const auto weight = [&](std::size_t r) { return options.row_weights.empty() ? 1.0 : options.row_weights[r]; };
    std::size_t m = 0;
    for (std::size_t r = 0; r < n; ++r) m += weight(r) > 0.0 ? 1 : 0;
    if (m == 0) throw Error(ErrorCode::DegenerateDesign, "tree fit with no rows of positive weight");

    const std::size_t k = hp.max_features.resolve(p);
    if (k < p && options.rng == nullptr)
        throw Error(ErrorCode::InvalidArgument, "feature subsampling requires a random generator");

    // ord[f * m + i]: i-th active row of feature f in ascending value order.
    std::vector<std::uint32_t> ord(p * m);
    for (std::size_t f = 0; f < p; ++f) {
        auto* seg = ord.data() + f * m;
        std::size_t i = 0;
        if (options.presorted) {
            for (auto r : options.presorted->order[f])
                if (weight(r) > 0.0) seg[i++] = r;
        } else {
            for (std::size_t r = 0; r < n; ++r)
                if (weight(r) > 0.0) seg[i++] = static_cast<std::uint32_t>(r);
            const auto fi = static_cast<Eigen::Index>(f);
            std::sort(seg, seg + m, [&](std::uint32_t a, std::uint32_t b) {
                const double xa = X(a, fi), xb = X(b, fi);
                return xa < xb || (xa == xb && a < b);
            });
        }
    }

    std::vector<std::uint32_t> scratch(m);
    std::vector<char> goes_left(n, 0);
    std::vector<std::size_t> features(p);
    std::iota(features.begin(), features.end(), std::size_t{0});
    const double min_leaf = hp.min_samples_leaf;
    const bool classify = task == Task::Classification;

    TreeModel tree;
    tree.task = task;
    tree.n_features = p;
    tree.nodes.emplace_back();
    std::vector<PendingNode> stack{{0, 0, m, 0}};

    while (!stack.empty()) {
        const PendingNode cur = stack.back();
        stack.pop_back();

        NodeStats st;
        for (std::size_t i = cur.start; i < cur.end; ++i) {
            const auto r = ord[i];
            const double w = weight(r);
            const double yr = y(r);
            st.weight += w;
            if (classify) (yr == 1.0 ? st.count1 : st.count0) += w;
            else st.sum += w * yr;
        }
        double node_impurity = 0.0;
        std::vector<double> value;
        if (classify) {
            node_impurity = gini_from_counts(st.count0, st.count1, st.weight);
            value = {st.count0 / st.weight, st.count1 / st.weight};
        } else {
            const double mean = st.sum / st.weight;
            double ss = 0.0;
            for (std::size_t i = cur.start; i < cur.end; ++i) {
                const auto r = ord[i];
                const double d = y(r) - mean;
                ss += weight(r) * d * d;
            }
            node_impurity = ss / st.weight;
            value = {mean};
        }
        {
            auto& node = tree.nodes[static_cast<std::size_t>(cur.id)];
            node.weight = st.weight;
            node.impurity = node_impurity;
            node.value = std::move(value);
        }

        const bool at_depth = hp.max_depth && cur.depth >= *hp.max_depth;
        if (at_depth || st.weight < hp.min_samples_split || st.weight < 2.0 * min_leaf || node_impurity <= 0.0) continue;

        // Candidate features, ascending so ties favour the lower index.
        std::span<const std::size_t> candidates(features);
        std::vector<std::size_t> sampled;
        if (k < p) {
            for (std::size_t i = 0; i < k; ++i) {
                const auto j = i + static_cast<std::size_t>(options.rng->below(p - i));
                std::swap(features[i], features[j]);
            }
            sampled.assign(features.begin(), features.begin() + static_cast<std::ptrdiff_t>(k));
            std::sort(sampled.begin(), sampled.end());
            candidates = sampled;
        }

        const double parent_total = st.weight * node_impurity;
        const double eps = 1e-12 * std::max(1.0, parent_total);
        double best_proxy = std::numeric_limits<double>::infinity();
        int best_feature = -1;
        double best_threshold = 0.0;

        for (auto f : candidates) {
            const auto* seg = ord.data() + f * m;
            const auto fi = static_cast<Eigen::Index>(f);
            double lw = 0.0, l1 = 0.0, ls = 0.0, lsq = 0.0;
            double tsq = 0.0;
            if (!classify)
                for (std::size_t i = cur.start; i < cur.end; ++i) tsq += weight(seg[i]) * y(seg[i]) * y(seg[i]);
            for (std::size_t i = cur.start; i + 1 < cur.end; ++i) {
                const auto r = seg[i];
                const double w = weight(r);
                lw += w;
                if (classify) l1 += w * y(r);
                else {
                    ls += w * y(r);
                    lsq += w * y(r) * y(r);
                }
                const double xi = X(r, fi);
                const double xn = X(seg[i + 1], fi);
                if (!(xn > xi)) continue;
                const double rw = st.weight - lw;
                if (lw < min_leaf || rw < min_leaf) continue;
                double proxy;
                if (classify) {
                    const double l0 = lw - l1;
                    const double r1 = st.count1 - l1;
                    const double r0 = rw - r1;
                    proxy = (lw - (l0 * l0 + l1 * l1) / lw) + (rw - (r0 * r0 + r1 * r1) / rw);
                } else {
                    const double rs = st.sum - ls;
                    const double rsq = tsq - lsq;
                    proxy = (lsq - ls * ls / lw) + (rsq - rs * rs / rw);
                }
                if (proxy < best_proxy - eps) {
                    best_proxy = proxy;
                    best_feature = static_cast<int>(f);
                    double mid = xi + (xn - xi) / 2.0;
                    if (!(mid < xn)) mid = xi;
                    best_threshold = mid;
                }
            }
        }
        if (best_feature < 0) continue;

        const auto bf = static_cast<Eigen::Index>(best_feature);
        std::size_t n_left = 0;
        for (std::size_t i = cur.start; i < cur.end; ++i) {
            const auto r = ord[i];
            goes_left[r] = X(r, bf) <= best_threshold ? 1 : 0;
            n_left += static_cast<std::size_t>(goes_left[r]);
        }
        if (n_left == 0 || n_left == cur.end - cur.start) continue;
        for (std::size_t f = 0; f < p; ++f) {
            auto* seg = ord.data() + f * m;
            std::size_t li = cur.start, ri = 0;
            for (std::size_t i = cur.start; i < cur.end; ++i) {
                const auto r = seg[i];
                if (goes_left[r]) seg[li++] = r;
                else scratch[ri++] = r;
            }
            std::copy(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(ri), seg + li);
        }

        const int left_id = static_cast<int>(tree.nodes.size());
        const int right_id = left_id + 1;
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        auto& node = tree.nodes[static_cast<std::size_t>(cur.id)];
        node.feature = best_feature;
        node.threshold = best_threshold;
        node.left = left_id;
        node.right = right_id;
        const std::size_t mid = cur.start + n_left;
        stack.push_back({right_id, mid, cur.end, cur.depth + 1});
        stack.push_back({left_id, cur.start, mid, cur.depth + 1});
    }
    return tree;
}

TreeModel fit_tree(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const ModelConfig& cfg) {
    SplitMix64 rng(cfg.seed);
    TreeFitOptions options;
    options.rng = &rng;
    return fit_tree(X, y, cfg.task, cfg.hp, options);
}

}  // namespace gradecast
