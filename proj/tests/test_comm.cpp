#include <cmath>
#include <cstring>
#include <limits>

#include "doctest.h"
#include "oracles.hpp"

#include "hpsparse/comm.hpp"
#include "hpsparse/generators.hpp"

using namespace hps;

namespace {

CsrMatrix example4x4() {
    return csr_from_triplets(
        4, 4, {{0, 0, 2}, {0, 2, 1}, {1, 1, 3}, {2, 0, 4}, {2, 3, 5}, {3, 3, 6}});
}

std::vector<double> pseudo_random(int n, std::uint64_t seed) {
    std::vector<double> v(n);
    std::uint64_t s = seed;
    for (int i = 0; i < n; ++i) {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        v[i] = static_cast<double>(s >> 11) / static_cast<double>(1ull << 53) - 0.5;
    }
    return v;
}

std::vector<double> run_dist_spmv(const CsrMatrix& m, const std::vector<double>& x_global,
                                  int R, int T) {
    RowLayout layout = partition_rows(m.n_rows, R);
    DistMatrix dm = split_dist(m, layout, T);
    ScatterPlan plan = build_scatter_plan(dm);
    DistVector x = make_dist_vector(dm), y = make_dist_vector(dm);
    scatter_from_global(x, x_global);
    RankGroup group(R, T);
    group.run([&](RankCtx& ctx) { dist_spmv(ctx, dm, x, y, plan); });
    return gather(y);
}

}  // namespace

TEST_CASE("allreduce_sum: rank-ordered deterministic summation") {
    {
        RankGroup g(2, 1);
        std::vector<double> got(2);
        g.run([&](RankCtx& ctx) {
            got[ctx.rank] = g.allreduce_sum(ctx.rank, ctx.rank == 0 ? 1.5 : 2.5);
        });
        CHECK(got == std::vector<double>{4.0, 4.0});
    }
    {
        RankGroup g(1, 1);
        double got = -1;
        g.run([&](RankCtx& ctx) { got = g.allreduce_sum(ctx.rank, 7.25); });
        CHECK(got == 7.25);
    }
    {
        // fixed-order semantics: [1e16, 1.0, -1e16] sums to 0.0
        RankGroup g(3, 1);
        const double partials[] = {1e16, 1.0, -1e16};
        std::vector<double> got(3);
        g.run([&](RankCtx& ctx) {
            got[ctx.rank] = g.allreduce_sum(ctx.rank, partials[ctx.rank]);
        });
        for (double v : got) CHECK(v == 0.0);
    }
}

TEST_CASE("mismatched collective participation times out") {
    RankGroup g(2, 1, std::chrono::milliseconds(100));
    CHECK_THROWS_AS(g.run([&](RankCtx& ctx) {
                        if (ctx.rank == 0) return;  // rank 0 skips the collective
                        g.allreduce_sum(ctx.rank, 1.0);
                    }),
                    CollectiveTimeout);
}

TEST_CASE("scatter: hand-traced 4x4 example") {
    DistMatrix dm = split_dist(example4x4(), partition_rows(4, 2), 1);
    ScatterPlan plan = build_scatter_plan(dm);
    DistVector x = make_dist_vector(dm);
    scatter_from_global(x, std::vector<double>{0, 1, 2, 3});  // owned[i] = global index
    RankGroup group(2, 1);
    group.run([&](RankCtx& ctx) {
        scatter_begin(ctx, x, plan);
        scatter_end(ctx, x, plan);
    });
    CHECK(x.ghost[0].values == std::vector<double>{2.0});
    CHECK(x.ghost[1].values == std::vector<double>{0.0});

    // repeated scatter with unchanged owned data is identical
    group.run([&](RankCtx& ctx) {
        scatter_begin(ctx, x, plan);
        scatter_end(ctx, x, plan);
    });
    CHECK(x.ghost[0].values == std::vector<double>{2.0});
    CHECK(x.ghost[1].values == std::vector<double>{0.0});
}

TEST_CASE("scatter: empty plan returns immediately") {
    CsrMatrix block = csr_from_triplets(4, 4, {{0, 1, 1.0}, {1, 0, 1.0}, {2, 3, 1.0}, {3, 2, 1.0}});
    DistMatrix dm = split_dist(block, partition_rows(4, 2), 1);
    ScatterPlan plan = build_scatter_plan(dm);
    CHECK(plan.n_messages() == 0);
    DistVector x = make_dist_vector(dm);
    RankGroup group(2, 1);
    group.run([&](RankCtx& ctx) {
        scatter_begin(ctx, x, plan);
        scatter_end(ctx, x, plan);
    });
}

TEST_CASE("scatter correctness oracle: ghosts equal their global index") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        CsrMatrix m = generate_random_sparse(21, 3, seed);
        for (int R : {1, 2, 3, 4}) {
            DistMatrix dm = split_dist(m, partition_rows(21, R), 1);
            ScatterPlan plan = build_scatter_plan(dm);
            DistVector x = make_dist_vector(dm);
            std::vector<double> idx(21);
            for (int i = 0; i < 21; ++i) idx[i] = i;
            scatter_from_global(x, idx);
            RankGroup group(R, 1);
            group.run([&](RankCtx& ctx) {
                scatter_begin(ctx, x, plan);
                scatter_end(ctx, x, plan);
            });
            for (int r = 0; r < R; ++r)
                for (std::size_t gpos = 0; gpos < dm.ghost_cols[r].size(); ++gpos)
                    CHECK(x.ghost[r].values[gpos] ==
                          static_cast<double>(dm.ghost_cols[r][gpos]));
        }
    }
}

TEST_CASE("instrumented scatter detects owned-data mutation") {
    DistMatrix dm = split_dist(example4x4(), partition_rows(4, 2), 1);
    ScatterPlan plan = build_scatter_plan(dm);
    DistVector x = make_dist_vector(dm);
    instr::set_enabled(true);
    instr::reset();
    RankGroup group(2, 1);
    CHECK_THROWS_AS(group.run([&](RankCtx& ctx) {
                        scatter_begin(ctx, x, plan);
                        x.owned[ctx.rank].values[0] += 1.0;  // forbidden
                        scatter_end(ctx, x, plan);
                    }),
                    std::logic_error);
    instr::set_enabled(false);
}

TEST_CASE("dist_spmv: identity is bitwise exact for every (R,T)") {
    const int n = 12;
    std::vector<Triplet> id;
    for (int i = 0; i < n; ++i) id.push_back({i, i, 1.0});
    CsrMatrix identity = csr_from_triplets(n, n, id);
    std::vector<double> x = pseudo_random(n, 3);
    for (int R : {1, 2, 4})
        for (int T : {1, 2, 4}) {
            std::vector<double> y = run_dist_spmv(identity, x, R, T);
            CHECK(std::memcmp(y.data(), x.data(), n * sizeof(double)) == 0);
        }
}

TEST_CASE("dist_spmv: 4x4 hand example") {
    for (int T : {1, 2}) {
        std::vector<double> y = run_dist_spmv(example4x4(), {1, 1, 1, 1}, 2, T);
        CHECK(y == std::vector<double>{3, 3, 9, 6});
    }
}

TEST_CASE("dist_spmv matches sequential oracle on poisson grid") {
    CsrMatrix m = generate_poisson2d(16);
    std::vector<double> x = pseudo_random(m.n_rows, 11);
    // sequential reference on the undistributed matrix
    ChunkedVector y_ref = alloc_zeroed(m.n_rows, chunk_ranges(m.n_rows, 1));
    seq_spmv(m, x, y_ref);
    for (int R : {1, 2, 4})
        for (int T : {1, 2, 4}) {
            std::vector<double> y = run_dist_spmv(m, x, R, T);
            CHECK(oracle::max_componentwise_rel_error(y, y_ref.values) <= 1e-13);
        }
}

TEST_CASE("dist_spmv with R=1,T=1 equals seq_spmv bitwise") {
    CsrMatrix m = generate_random_sparse(30, 4, 5);
    std::vector<double> x = pseudo_random(30, 6);
    ChunkedVector y_ref = alloc_zeroed(30, chunk_ranges(30, 1));
    seq_spmv(m, x, y_ref);
    std::vector<double> y = run_dist_spmv(m, x, 1, 1);
    CHECK(std::memcmp(y.data(), y_ref.values.data(), 30 * sizeof(double)) == 0);
}

TEST_CASE("overlap safety: scatter-first variant is bitwise identical") {
    CsrMatrix m = generate_poisson2d(8);
    std::vector<double> xg = pseudo_random(m.n_rows, 13);
    for (int R : {2, 4}) {
        DistMatrix dm = split_dist(m, partition_rows(m.n_rows, R), 2);
        ScatterPlan plan = build_scatter_plan(dm);
        DistVector x = make_dist_vector(dm);
        DistVector y_overlap = make_dist_vector(dm), y_seq = make_dist_vector(dm);
        scatter_from_global(x, xg);
        RankGroup group(R, 2);
        group.run([&](RankCtx& ctx) {
            dist_spmv(ctx, dm, x, y_overlap, plan);
            // non-overlapped variant: complete the scatter before the
            // on-diagonal multiply
            const int me = ctx.rank;
            scatter_begin(ctx, x, plan);
            scatter_end(ctx, x, plan);
            seq_spmv(dm.diag[me], x.owned[me].values, y_seq.owned[me], false);
            seq_spmv(dm.offdiag[me], x.ghost[me].values, y_seq.owned[me], true);
        });
        auto a = gather(y_overlap), b = gather(y_seq);
        CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
    }
}

TEST_CASE("dist_dot and dist_norm2") {
    const int n = 10;
    for (int R : {1, 2, 4})
        for (int T : {1, 2}) {
            RowLayout layout = partition_rows(n, R);
            DistVector x = make_dist_vector(layout, T), y = make_dist_vector(layout, T);
            scatter_from_global(x, std::vector<double>(n, 1.0));
            scatter_from_global(y, std::vector<double>(n, 1.0));
            std::vector<double> dots(R), norms(R);
            RankGroup group(R, T);
            group.run([&](RankCtx& ctx) {
                dots[ctx.rank] = dist_dot(ctx, x, y);
                norms[ctx.rank] = dist_norm2(ctx, x);
            });
            for (int r = 0; r < R; ++r) {
                CHECK(dots[r] == 10.0);
                CHECK(norms[r] == doctest::Approx(std::sqrt(10.0)).epsilon(1e-15));
            }
        }
}

TEST_CASE("dist_dot with a zero vector is exactly zero") {
    RowLayout layout = partition_rows(16, 4);
    DistVector x = make_dist_vector(layout, 2), z = make_dist_vector(layout, 2);
    scatter_from_global(x, pseudo_random(16, 17));
    double got = -1;
    RankGroup group(4, 2);
    group.run([&](RankCtx& ctx) {
        double d = dist_dot(ctx, x, z);
        if (ctx.rank == 0) got = d;
    });
    CHECK(got == 0.0);
}

TEST_CASE("dist_dot rank-grouping differences stay within the epsilon bound") {
    const int n = 1000;
    auto xs = pseudo_random(n, 21), ys = pseudo_random(n, 22);
    double abs_sum = 0.0;
    for (int i = 0; i < n; ++i) abs_sum += std::abs(xs[i] * ys[i]);

    auto dot_with = [&](int R) {
        RowLayout layout = partition_rows(n, R);
        DistVector x = make_dist_vector(layout, 1), y = make_dist_vector(layout, 1);
        scatter_from_global(x, xs);
        scatter_from_global(y, ys);
        double got = 0;
        RankGroup group(R, 1);
        group.run([&](RankCtx& ctx) {
            double d = dist_dot(ctx, x, y);
            if (ctx.rank == 0) got = d;
        });
        return got;
    };
    CHECK(std::abs(dot_with(4) - dot_with(1)) <=
          n * std::numeric_limits<double>::epsilon() * abs_sum);
}

TEST_CASE("collective sequence mismatch is caught when instrumented") {
    instr::set_enabled(true);
    instr::reset();
    RankGroup g(2, 1, std::chrono::milliseconds(200));
    // rank 1 performs an extra reduction: either a sequence mismatch or a
    // timeout must surface, never a silent wrong answer
    CHECK_THROWS(g.run([&](RankCtx& ctx) {
        g.allreduce_sum(ctx.rank, 1.0);
        if (ctx.rank == 1) g.allreduce_sum(ctx.rank, 2.0);
    }));
    instr::set_enabled(false);
}
