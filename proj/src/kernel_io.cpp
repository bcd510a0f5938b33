#include "pseudometric/kernel_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pseudometric/errors.hpp"

namespace pseudometric {

namespace {

struct File {
    std::FILE* f;
    explicit File(const std::string& path) : f(std::fopen(path.c_str(), "w")) {
        if (!f) throw ConfigError("cannot write " + path);
    }
    ~File() { std::fclose(f); }
};

bool parse_pair(const std::string& line, const std::string& key, double& a, double& b) {
    const std::string prefix = "# " + key + ",";
    if (line.rfind(prefix, 0) != 0) return false;
    // "# key_re,key_im,<re>,<im>"
    std::string rest = line.substr(2);
    for (char& c : rest)
        if (c == ',') c = ' ';
    std::istringstream ss(rest);
    std::string k1, k2;
    if (!(ss >> k1 >> k2 >> a >> b)) throw ConfigError("malformed kernel header line: " + line);
    return true;
}

} // namespace

void write_kernel_csv(const Kernel& k, const std::string& path) {
    File out(path);
    const Grid& g = k.grid;
    std::fprintf(out.f, "# c_diag_re,c_diag_im,%.12e,%.12e\n", k.c_diag.real(), k.c_diag.imag());
    std::fprintf(out.f, "# c_anti_re,c_anti_im,%.12e,%.12e\n", k.c_anti.real(), k.c_anti.imag());
    std::fprintf(out.f, "# grid_X,grid_n,%.12e,%d\n", g.X(), g.n());
    std::fprintf(out.f, "x,y,re,im\n");
    for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j)
            std::fprintf(out.f, "%.12e,%.12e,%.12e,%.12e\n", g.node(i), g.node(j), k.smooth(i, j).real(),
                         k.smooth(i, j).imag());
}

Kernel read_kernel_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open kernel file " + path);
    std::string line;
    double dre = 0, dim = 0, are = 0, aim = 0, X = 0, nd = 0;
    bool have_d = false, have_a = false, have_g = false, have_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            have_d = parse_pair(line, "c_diag_re", dre, dim) || have_d;
            have_a = parse_pair(line, "c_anti_re", are, aim) || have_a;
            have_g = parse_pair(line, "grid_X", X, nd) || have_g;
            continue;
        }
        if (line.rfind("x,y,re,im", 0) != 0) throw ConfigError("kernel file " + path + " lacks the x,y,re,im header");
        have_header = true;
        break;
    }
    if (!have_d || !have_a || !have_g || !have_header)
        throw ConfigError("kernel file " + path + " is missing header lines");
    const int n = static_cast<int>(std::lround(nd));
    Kernel k(Grid(X, n));
    k.c_diag = {dre, dim};
    k.c_anti = {are, aim};
    long count = 0;
    const long total = static_cast<long>(n) * n;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (count >= total) throw ConfigError("kernel file " + path + " has too many rows");
        for (char& c : line)
            if (c == ',') c = ' ';
        std::istringstream ss(line);
        double x, y, re, im;
        if (!(ss >> x >> y >> re >> im)) throw ConfigError("malformed kernel row " + std::to_string(count + 1));
        const int i = static_cast<int>(count / n), j = static_cast<int>(count % n);
        const double tol = 1e-9 * k.grid.h();
        if (std::abs(x - k.grid.node(i)) > tol || std::abs(y - k.grid.node(j)) > tol)
            throw ConfigError("kernel row " + std::to_string(count + 1) + " does not match the grid metadata");
        k.smooth(i, j) = {re, im};
        ++count;
    }
    if (count != total)
        throw ConfigError("kernel file " + path + " has " + std::to_string(count) + " rows, expected " +
                          std::to_string(total));
    return k;
}

void write_kernel_pgm(const Kernel& k, const std::string& path) {
    const Eigen::MatrixXd a = k.smooth.cwiseAbs();
    const double lo = a.minCoeff(), hi = a.maxCoeff();
    File out(path);
    const int n = k.grid.n();
    std::fprintf(out.f, "P2\n# abs(smooth) min %.12e max %.12e\n%d %d\n255\n", lo, hi, n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const int v = hi > lo ? static_cast<int>(std::lround(255.0 * (a(i, j) - lo) / (hi - lo))) : 0;
            std::fprintf(out.f, j + 1 < n ? "%d " : "%d\n", v);
        }
    }
}

} // namespace pseudometric
