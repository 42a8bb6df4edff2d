#include "hpsparse/rcm.hpp"

#include <algorithm>
#include <queue>

namespace hps {

namespace {

// Symmetrized adjacency without the diagonal, neighbor lists sorted.
std::vector<std::vector<int>> build_adjacency(const CsrMatrix& m) {
    std::vector<std::vector<int>> adj(m.n_rows);
    for (int r = 0; r < m.n_rows; ++r)
        for (int k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k) {
            int c = m.col_idx[k];
            if (c == r) continue;
            adj[r].push_back(c);
            adj[c].push_back(r);
        }
    for (auto& nb : adj) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    }
    return adj;
}

// BFS from start restricted to one component; fills levels and returns
// the node list of the last level.
std::vector<int> bfs_levels(const std::vector<std::vector<int>>& adj, int start,
                            std::vector<int>& level, int& eccentricity) {
    std::fill(level.begin(), level.end(), -1);
    std::vector<int> frontier{start}, last;
    level[start] = 0;
    eccentricity = 0;
    while (!frontier.empty()) {
        last = frontier;
        std::vector<int> next;
        for (int u : frontier)
            for (int v : adj[u])
                if (level[v] < 0) {
                    level[v] = level[u] + 1;
                    next.push_back(v);
                }
        if (!next.empty()) eccentricity = level[next.front()];
        frontier = std::move(next);
    }
    return last;
}

// George & Liu repeated-BFS heuristic: start from the component's
// min-degree node, move to a min-degree node of the last BFS level while
// the eccentricity keeps growing. Ties broken by lowest original index.
int pseudo_peripheral(const std::vector<std::vector<int>>& adj,
                      const std::vector<int>& component, std::vector<int>& level) {
    auto degree = [&](int u) { return static_cast<int>(adj[u].size()); };
    int x = component.front();
    for (int u : component)
        if (degree(u) < degree(x) || (degree(u) == degree(x) && u < x)) x = u;

    int ecc = -1;
    for (;;) {
        int e;
        std::vector<int> last = bfs_levels(adj, x, level, e);
        if (e <= ecc) return x;
        ecc = e;
        int y = last.front();
        for (int u : last)
            if (degree(u) < degree(y) || (degree(u) == degree(y) && u < y)) y = u;
        if (y == x) return x;
        x = y;
    }
}

}  // namespace

Permutation rcm_order(const CsrMatrix& m) {
    if (!m.square()) throw std::invalid_argument("rcm_order requires a square matrix");
    const int n = m.n_rows;
    auto adj = build_adjacency(m);

    std::vector<char> visited(n, 0);
    std::vector<int> level(n), order;
    order.reserve(n);

    // Components in ascending order of their smallest original index.
    for (int seed = 0; seed < n; ++seed) {
        if (visited[seed]) continue;

        std::vector<int> component;
        {
            std::vector<int> stack{seed};
            std::vector<char> in_comp(n, 0);
            in_comp[seed] = 1;
            while (!stack.empty()) {
                int u = stack.back();
                stack.pop_back();
                component.push_back(u);
                for (int v : adj[u])
                    if (!in_comp[v]) {
                        in_comp[v] = 1;
                        stack.push_back(v);
                    }
            }
        }

        int start = pseudo_peripheral(adj, component, level);

        // Cuthill-McKee: BFS enqueueing neighbors by ascending degree,
        // ties by lowest index.
        const std::size_t comp_begin = order.size();
        std::queue<int> q;
        q.push(start);
        visited[start] = 1;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            order.push_back(u);
            std::vector<int> nbrs;
            for (int v : adj[u])
                if (!visited[v]) nbrs.push_back(v);
            std::sort(nbrs.begin(), nbrs.end(), [&](int a, int b) {
                auto da = adj[a].size(), db = adj[b].size();
                return da != db ? da < db : a < b;
            });
            for (int v : nbrs) {
                visited[v] = 1;
                q.push(v);
            }
        }
        std::reverse(order.begin() + comp_begin, order.end());
    }

    Permutation p;
    p.new_of_old.resize(n);
    for (int pos = 0; pos < n; ++pos) p.new_of_old[order[pos]] = pos;
    return p;
}

}  // namespace hps
