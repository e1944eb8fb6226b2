#include <doctest.h>

#include <cmath>

#include "hdivprec/spaces.hpp"

using namespace hdivprec;

TEST_CASE("dof counts and constraints") {
  const Mesh m4 = Mesh::unit_square(4);

  const DofMap rt0 = build_dofmap(m4, SpaceKind::RT0, SideSet::all());
  CHECK(rt0.total_dofs() == 56);
  CHECK(rt0.num_constrained() == 16);
  CHECK(rt0.num_free() == 40);

  const DofMap p0 = build_dofmap(m4, SpaceKind::P0, SideSet::none());
  CHECK(p0.total_dofs() == 32);
  CHECK(p0.num_constrained() == 0);

  const Mesh m2 = Mesh::unit_square(2);
  const DofMap p2 = build_dofmap(m2, SpaceKind::P2Vec, {Side::Left, Side::Right, Side::Bottom});
  CHECK(p2.total_dofs() == 50);
  // 2 * (7 boundary vertices + 6 boundary edges) on the three sides
  CHECK(p2.num_constrained() == 26);
}

TEST_CASE("P0 rejects essential conditions") {
  const Mesh m = Mesh::unit_square(2);
  CHECK_THROWS_AS(build_dofmap(m, SpaceKind::P0, {Side::Left}), std::invalid_argument);
}

TEST_CASE("free index map is a compact relabeling") {
  const Mesh m = Mesh::unit_square(3);
  const DofMap rt0 = build_dofmap(m, SpaceKind::RT0, {Side::Top});
  int next = 0;
  for (int d = 0; d < rt0.total_dofs(); ++d) {
    if (rt0.is_constrained(d)) {
      CHECK(rt0.free_index(d) == -1);
    } else {
      CHECK(rt0.free_index(d) == next);
      CHECK(rt0.free_dofs()[next] == d);
      ++next;
    }
  }
  CHECK(next == rt0.num_free());
}

TEST_CASE("RT0 reference basis") {
  const Mesh m = Mesh::unit_square(2);
  for (int c = 0; c < m.num_cells(); ++c) {
    const CellGeometry g = CellGeometry::from(m, c);
    for (int i = 0; i < 3; ++i) {
      // unit normal trace on its own edge: |e| * (phi . n_out) = |e|
      const int a = (i + 1) % 3, b = (i + 2) % 3;
      const Eigen::Vector2d mid = 0.5 * (g.p[a] + g.p[b]);
      const Eigen::Vector2d t = g.p[b] - g.p[a];
      const Eigen::Vector2d n_out = Eigen::Vector2d(t.y(), -t.x()).normalized();
      CHECK(rt0_value(g, i, mid).dot(n_out) == doctest::Approx(1.0).epsilon(1e-13));
      // vanishing normal component on the other edges
      for (int j = 0; j < 3; ++j) {
        if (j == i) continue;
        const int ja = (j + 1) % 3, jb = (j + 2) % 3;
        const Eigen::Vector2d jm = 0.5 * (g.p[ja] + g.p[jb]);
        const Eigen::Vector2d jt = g.p[jb] - g.p[ja];
        const Eigen::Vector2d jn = Eigen::Vector2d(jt.y(), -jt.x()).normalized();
        CHECK(rt0_value(g, i, jm).dot(jn) == doctest::Approx(0.0).epsilon(1e-13));
      }
      // divergence is the closed form |e| / |T|
      CHECK(rt0_div(g, i) == doctest::Approx(g.edge_length[i] / g.area).epsilon(1e-14));
    }
  }
}

TEST_CASE("RT0 normal trace is continuous across interior edges") {
  const Mesh m = Mesh::unit_square(3);
  const DofMap rt0 = build_dofmap(m, SpaceKind::RT0, SideSet::none());
  for (int e = 0; e < m.num_edges(); ++e) {
    if (m.is_boundary_edge(e)) continue;
    const Eigen::Vector2d n = m.edge_normal(e);
    const auto& ev = m.edge(e).vertices;
    // sample the trace at two quadrature points along the edge
    for (double s : {0.25, 0.75}) {
      const Eigen::Vector2d x = (1 - s) * m.vertex(ev[0]) + s * m.vertex(ev[1]);
      double trace[2];
      for (int side = 0; side < 2; ++side) {
        const int c = m.edge_cells(e)[side];
        const CellGeometry g = CellGeometry::from(m, c);
        const auto& dofs = rt0.cell_dofs(c);
        int li = 0;
        while (dofs[li].index != e) ++li;
        trace[side] = (dofs[li].sign * rt0_value(g, li, x)).dot(n);
      }
      CHECK(trace[0] == doctest::Approx(trace[1]).epsilon(1e-12));
    }
  }
}

TEST_CASE("P2 basis is nodal and a partition of unity") {
  const Mesh m = Mesh::unit_square(2);
  const CellGeometry g = CellGeometry::from(m, 3);

  const std::array<std::array<double, 3>, 6> nodes = {{
      {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0.5, 0.5}, {0.5, 0, 0.5}, {0.5, 0.5, 0}}};
  for (int n = 0; n < 6; ++n) {
    const auto vals = p2_values(nodes[n]);
    for (int i = 0; i < 6; ++i)
      CHECK(vals[i] == doctest::Approx(n == i ? 1.0 : 0.0).epsilon(1e-14));
  }

  // partition of unity at quadrature points, and gradients sum to zero
  for (const auto& lambda : {std::array<double, 3>{0.5, 0.5, 0.0},
                             std::array<double, 3>{0.2, 0.3, 0.5}}) {
    const auto vals = p2_values(lambda);
    double sum = 0.0;
    for (double v : vals) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    const auto grads = p2_gradients(g, lambda);
    Eigen::Vector2d gs = Eigen::Vector2d::Zero();
    for (const auto& gv : grads) gs += gv;
    CHECK(gs.norm() == doctest::Approx(0.0).epsilon(1e-12));
  }
}
