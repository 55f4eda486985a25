#include "tensorsandwich/io.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace ts {

namespace {

constexpr char kTensorMagic[8] = {'T', 'N', 'S', 'R', '0', '0', '0', '1'};
constexpr char kModelMagic[8] = {'C', 'P', 'F', 'M', '0', '0', '0', '1'};

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return in;
}

void write_i64(std::ostream& out, std::int64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::int64_t read_i64(std::istream& in) {
    std::int64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw std::runtime_error("truncated container file");
    return v;
}

void write_doubles(std::ostream& out, const double* data, std::size_t count) {
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
}

void read_doubles(std::istream& in, double* data, std::size_t count) {
    in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
    if (!in) throw std::runtime_error("truncated container file");
}

void expect_magic(std::istream& in, const char* magic, const std::string& what) {
    char buf[8];
    in.read(buf, 8);
    if (!in || std::memcmp(buf, magic, 8) != 0)
        throw std::runtime_error("not a " + what + " container (bad magic)");
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double v = m(i, j);
            write_doubles(out, &v, 1);
        }
}

Eigen::MatrixXd read_matrix(std::istream& in, std::int64_t rows, std::int64_t cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) read_doubles(in, &m(i, j), 1);
    return m;
}

void check_dim(std::int64_t v, const char* name) {
    if (v < 1 || v > (1 << 20)) throw std::runtime_error(std::string("implausible ") + name);
}

}  // namespace

void write_tensor(const DenseTensor3& t, const std::string& path) {
    auto out = open_out(path);
    out.write(kTensorMagic, 8);
    write_i64(out, t.n1());
    write_i64(out, t.n2());
    write_i64(out, t.n3());
    write_doubles(out, t.values().data(), t.values().size());
    if (!out) throw std::runtime_error("write failed: " + path);
}

DenseTensor3 read_tensor(const std::string& path) {
    auto in = open_in(path);
    expect_magic(in, kTensorMagic, "tensor");
    const std::int64_t n1 = read_i64(in), n2 = read_i64(in), n3 = read_i64(in);
    check_dim(n1, "n1");
    check_dim(n2, "n2");
    check_dim(n3, "n3");
    std::vector<double> values(static_cast<std::size_t>(n1 * n2 * n3));
    read_doubles(in, values.data(), values.size());
    return DenseTensor3(static_cast<int>(n1), static_cast<int>(n2), static_cast<int>(n3),
                        std::move(values));
}

void write_model(const CPModel& model, const std::string& path) {
    model.validate();
    auto out = open_out(path);
    out.write(kModelMagic, 8);
    write_i64(out, model.n1());
    write_i64(out, model.n2());
    write_i64(out, model.n3());
    write_i64(out, model.rank());
    write_matrix(out, model.A);
    write_matrix(out, model.B);
    write_matrix(out, model.C);
    if (!out) throw std::runtime_error("write failed: " + path);
}

CPModel read_model(const std::string& path) {
    auto in = open_in(path);
    expect_magic(in, kModelMagic, "model");
    const std::int64_t n1 = read_i64(in), n2 = read_i64(in), n3 = read_i64(in), r = read_i64(in);
    check_dim(n1, "n1");
    check_dim(n2, "n2");
    check_dim(n3, "n3");
    check_dim(r, "rank");
    CPModel model;
    model.A = read_matrix(in, n1, r);
    model.B = read_matrix(in, n2, r);
    model.C = read_matrix(in, n3, r);
    return model;
}

}  // namespace ts
