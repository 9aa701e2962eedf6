#include <math.h>
#include <stdio.h>
#include <stdlib.h>

#include "tcbm.h"

#define CHECK(call)                                                         \
    do {                                                                    \
        TcbmStatus status_ = (call);                                        \
        if (status_ != TCBM_STATUS_OK) {                                    \
            fprintf(stderr, "%s failed (%d): %s\n", #call, (int)status_,    \
                    tcbm_last_error());                                     \
            return 1;                                                       \
        }                                                                   \
    } while (0)

int main(void) {
    TcbmIfs *ifs = NULL;
    double tau = 0.0;
    CHECK(tcbm_ifs_preset("cantor3", &ifs));
    CHECK(tcbm_lq_spectrum(ifs, 2.0, 1e-13, &tau));
    if (fabs(tau - log(2.0) / log(3.0)) > 1e-10) {
        fprintf(stderr, "tau(2) = %.12f\n", tau);
        return 1;
    }

    TcbmVariance *v = NULL;
    CHECK(tcbm_variance_cantor(&v));
    enum { N = 4097 };
    double *times = malloc(N * sizeof(double));
    for (int i = 0; i < N; i++) {
        times[i] = (double)i / (N - 1);
    }
    TcbmPath *path = NULL;
    CHECK(tcbm_path_sample(v, 0.5, times, N, 42, 0, &path));
    double *values = malloc(N * sizeof(double));
    CHECK(tcbm_path_values(path, values, tcbm_path_len(path)));
    double dim = 0.0;
    CHECK(tcbm_box_dimension(path, 3, 8, &dim));

    TcbmStatus bad = tcbm_variance_eval(v, 2.0, &tau);
    if (bad != TCBM_STATUS_DOMAIN || tcbm_last_error() == NULL) {
        fprintf(stderr, "expected a domain error, got %d\n", (int)bad);
        return 1;
    }
    printf("values[0]=%g dim=%.4f version=%s\n", values[0], dim, tcbm_version());

    tcbm_path_free(path);
    tcbm_variance_free(v);
    tcbm_ifs_free(ifs);
    free(times);
    free(values);
    return 0;
}
