#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ptcl {

using Complex = std::complex<double>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

inline constexpr Complex I{0.0, 1.0};

enum class Space : unsigned char { Occ, Virt };

struct ParseError : std::runtime_error {
    int line = 0;
    ParseError(const std::string& msg, int line_no = 0)
        : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg : msg),
          line(line_no) {}
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IntegratorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dense rank-4 tensor, row-major over (p, q, r, s).
class Tensor4 {
public:
    Tensor4() = default;
    explicit Tensor4(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n * n, Complex{}) {}

    int dim() const { return n_; }
    Complex& operator()(int p, int q, int r, int s) { return data_[index(p, q, r, s)]; }
    const Complex& operator()(int p, int q, int r, int s) const { return data_[index(p, q, r, s)]; }
    std::vector<Complex>& raw() { return data_; }
    const std::vector<Complex>& raw() const { return data_; }

private:
    std::size_t index(int p, int q, int r, int s) const {
        return ((static_cast<std::size_t>(p) * n_ + q) * n_ + r) * n_ + s;
    }
    int n_ = 0;
    std::vector<Complex> data_;
};

// Thread-safe; messages are also kept until taken.
void warn(const std::string& msg);
std::vector<std::string> take_warnings();
void set_warnings_quiet(bool quiet);

}  // namespace ptcl
