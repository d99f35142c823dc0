#include "gradecast/linear.hpp"

#include <Eigen/QR>

#include "gradecast/error.hpp"

namespace gradecast {

LinearModel fit_linear(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const Hyperparameters& hp) {
    if (X.rows() == 0 || X.cols() == 0) throw Error(ErrorCode::DegenerateDesign, "linear fit on an empty design matrix");
    if (X.rows() != y.size()) throw Error(ErrorCode::LengthMismatch, "design rows and target length differ");

    LinearModel m;
    if (hp.fit_intercept) {
        const Eigen::RowVectorXd x_mean = X.colwise().mean();
        const double y_mean = y.mean();
        const Eigen::MatrixXd Xc = X.rowwise() - x_mean;
        const Eigen::VectorXd yc = y.array() - y_mean;
        m.weights = Xc.completeOrthogonalDecomposition().solve(yc);
        m.intercept = y_mean - x_mean.dot(m.weights);
    } else {
        m.weights = X.completeOrthogonalDecomposition().solve(y);
        m.intercept = 0.0;
    }
    return m;
}

}  // namespace gradecast
