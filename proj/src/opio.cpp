#include "fsbp/opio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace fsbp {

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void write_vector(std::ostream& os, const std::string& name,
                  const Eigen::VectorXd& v) {
    os << name << '\n';
    for (Eigen::Index i = 0; i < v.size(); ++i)
        os << format_full(v[i]) << (i + 1 < v.size() ? ' ' : '\n');
}

void write_matrix(std::ostream& os, const std::string& name,
                  const Eigen::MatrixXd& m) {
    os << name << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            os << format_full(m(i, j)) << (j + 1 < m.cols() ? ' ' : '\n');
}

Eigen::VectorXd read_values(std::istream& is, Eigen::Index count,
                            const std::string& what) {
    Eigen::VectorXd v(count);
    for (Eigen::Index i = 0; i < count; ++i)
        if (!(is >> v[i]))
            throw ParseError("operator file: truncated section " + what);
    return v;
}

}  // namespace

void save_operator(const std::string& path, const FsbpOperatorSet& set) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write operator file " + path);
    const int n = set.size();
    os << "fsbp v1 N=" << n << " space=" << set.space_tag << '\n';
    write_vector(os, "nodes", set.grid);
    Eigen::MatrixXd P = Eigen::MatrixXd(set.p.asDiagonal());
    write_matrix(os, "P", P);
    write_matrix(os, "Q", set.Q);
    write_matrix(os, "D1", set.D1);
    write_matrix(os, "D2", set.has_d2()
                               ? set.D2
                               : Eigen::MatrixXd::Zero(n, n).eval());
    write_matrix(os, "S", set.S);
}

FsbpOperatorSet load_operator(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open operator file " + path);
    std::string header;
    std::getline(is, header);
    std::istringstream hs(header);
    std::string magic, version, nfield, sfield;
    hs >> magic >> version >> nfield >> sfield;
    if (magic != "fsbp" || version != "v1" || nfield.rfind("N=", 0) != 0 ||
        sfield.rfind("space=", 0) != 0)
        throw ParseError("operator file: bad header '" + header + "'");
    const int n = std::stoi(nfield.substr(2));
    if (n < 2) throw ParseError("operator file: invalid N");
    const std::string tag = sfield.substr(6);

    FsbpOperatorSet set;
    set.space_tag = tag;
    std::string section;
    auto expect = [&](const char* name) {
        if (!(is >> section) || section != name)
            throw ParseError(std::string("operator file: expected section ") + name);
    };
    expect("nodes");
    set.grid = read_values(is, n, "nodes");
    expect("P");
    const Eigen::VectorXd pfull = read_values(is, n * n, "P");
    set.p.resize(n);
    for (int i = 0; i < n; ++i) set.p[i] = pfull[i * n + i];
    auto read_mat = [&](const char* name) {
        expect(name);
        const Eigen::VectorXd flat = read_values(is, n * n, name);
        Eigen::MatrixXd m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = flat[i * n + j];
        return m;
    };
    set.Q = read_mat("Q");
    set.D1 = read_mat("D1");
    set.D2 = read_mat("D2");
    set.S = read_mat("S");
    set.element = {set.grid[0], set.grid[n - 1]};

    if (tag != "custom") {
        set.target_space = parse_space_spec(tag, set.element);
        set.exactness_space =
            direct_sum(set.target_space, derivative_space(set.target_space));
    } else {
        set.target_space = FunctionSpace({}, set.element);
        set.exactness_space = FunctionSpace({}, set.element);
    }
    return set;
}

}  // namespace fsbp
