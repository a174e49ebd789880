#include "thfield/fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace thfield::fft {

namespace {
std::mutex g_plan_mutex;  // FFTW plan creation is not thread-safe

void run_2d(std::complex<double>* data, int nx, int ny, int sign) {
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(g_plan_mutex);
        plan = fftw_plan_dft_2d(nx, ny, reinterpret_cast<fftw_complex*>(data),
                                reinterpret_cast<fftw_complex*>(data), sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(g_plan_mutex);
        fftw_destroy_plan(plan);
    }
}

}  // namespace

void forward2d(std::complex<double>* data, int nx, int ny) {
    run_2d(data, nx, ny, FFTW_FORWARD);
}

void inverse2d(std::complex<double>* data, int nx, int ny) {
    run_2d(data, nx, ny, FFTW_BACKWARD);
    const double scale = 1.0 / (static_cast<double>(nx) * ny);
    const std::size_t n = static_cast<std::size_t>(nx) * ny;
    for (std::size_t i = 0; i < n; ++i) data[i] *= scale;
}

int next_fast_size(int n) {
    for (int m = n;; ++m) {
        int r = m;
        while (r % 2 == 0) r /= 2;
        while (r % 3 == 0) r /= 3;
        while (r % 5 == 0) r /= 5;
        if (r == 1) return m;
    }
}

double dft_frequency(int m, int n, double h) {
    const int ms = (m <= n / 2) ? m : m - n;
    return 2.0 * 3.14159265358979323846264338327950 * ms / (n * h);
}

}
