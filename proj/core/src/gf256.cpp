#include "ccsim/gf256.hpp"

#include <stdexcept>

namespace ccsim::gf256 {
namespace {

struct Tables {
    std::uint8_t exp[512];
    std::uint8_t log[256];
    Tables() {
        int x = 1;
        for (int i = 0; i < 255; ++i) {
            exp[i] = static_cast<std::uint8_t>(x);
            log[x] = static_cast<std::uint8_t>(i);
            x <<= 1;
            if (x & 0x100) x ^= 0x11d;
        }
        for (int i = 255; i < 512; ++i) exp[i] = exp[i - 255];
        log[0] = 0;
    }
};

const Tables& tables() {
    static const Tables t;
    return t;
}

} // namespace

std::uint8_t mul(std::uint8_t a, std::uint8_t b) {
    if (a == 0 || b == 0) return 0;
    const Tables& t = tables();
    return t.exp[t.log[a] + t.log[b]];
}

std::uint8_t inv(std::uint8_t a) {
    if (a == 0) throw std::invalid_argument("gf256: zero has no inverse");
    const Tables& t = tables();
    return t.exp[255 - t.log[a]];
}

std::uint8_t div(std::uint8_t a, std::uint8_t b) { return mul(a, inv(b)); }

Matrix identity(int n) {
    Matrix m(n, std::vector<std::uint8_t>(n, 0));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

Matrix mat_mul(const Matrix& a, const Matrix& b) {
    int rows = static_cast<int>(a.size());
    int inner = static_cast<int>(b.size());
    int cols = static_cast<int>(b[0].size());
    Matrix out(rows, std::vector<std::uint8_t>(cols, 0));
    for (int i = 0; i < rows; ++i)
        for (int k = 0; k < inner; ++k) {
            std::uint8_t aik = a[i][k];
            if (!aik) continue;
            for (int j = 0; j < cols; ++j) out[i][j] ^= mul(aik, b[k][j]);
        }
    return out;
}

Matrix mat_inv(const Matrix& m) {
    int n = static_cast<int>(m.size());
    Matrix a = m;
    Matrix b = identity(n);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (a[r][col]) {
                pivot = r;
                break;
            }
        if (pivot < 0) throw std::invalid_argument("gf256: singular matrix");
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        std::uint8_t piv_inv = inv(a[col][col]);
        for (int j = 0; j < n; ++j) {
            a[col][j] = mul(a[col][j], piv_inv);
            b[col][j] = mul(b[col][j], piv_inv);
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || !a[r][col]) continue;
            std::uint8_t factor = a[r][col];
            for (int j = 0; j < n; ++j) {
                a[r][j] ^= mul(factor, a[col][j]);
                b[r][j] ^= mul(factor, b[col][j]);
            }
        }
    }
    return b;
}

} // namespace ccsim::gf256
