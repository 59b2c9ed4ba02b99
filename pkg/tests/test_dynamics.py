"""Charged trajectories, current flows, and conserved monitors."""

import math
import os

import numpy as np
import pytest

from sqk3 import dynamics as D
from sqk3 import geometry as G
from sqk3 import sqk as K
from sqk3.geometry import SpaceForm
from sqk3.spinors import contact_maxwell, dirac_current


def unit_frame_velocity(sf, p, frame_components):
    return G.frame_to_chart(sf, p, frame_components)


class TestGeodesics:
    def test_speed_conservation_long_run(self):
        sf = SpaceForm(0, 1.0)
        p0 = np.array([math.pi / 2, 0.0, 0.0])
        v0 = unit_frame_velocity(sf, p0, [0.0, 1.0, 0.0])
        traj = D.integrate_charged(sf, p0, v0, 0.0, np.zeros((3, 3)), 10.0, 1e-3)
        sp = traj.monitors["speed2"]
        assert np.max(np.abs(sp - sp[0])) < 1e-6

    def test_great_circle_period(self):
        # unit-speed geodesics of the round sphere close after arc length
        # 2 pi; in the fiber chart the azimuth advances by 4 pi.  The step
        # divides the period so the final sample lands exactly on it.
        sf = SpaceForm(0, 1.0)
        p0 = np.array([math.pi / 2, 0.0, 0.0])
        v0 = unit_frame_velocity(sf, p0, [0.0, 1.0, 0.0])
        dt = 2.0 * math.pi / 6400.0
        traj = D.integrate_charged(sf, p0, v0, 0.0, np.zeros((3, 3)),
                                   2.0 * math.pi, dt)
        end = traj.positions[-1]
        target = np.array([math.pi / 2, 4.0 * math.pi, 0.0])
        assert np.max(np.abs(end - target)) < 1e-4

    def test_generic_geodesic_residual(self):
        sf = SpaceForm(1, 0.0)
        p0 = np.array([1.4, 0.6, 2.0])
        v0 = unit_frame_velocity(sf, p0, [0.4, 0.7, -0.2])
        traj = D.integrate_charged(sf, p0, v0, 0.0, np.zeros((3, 3)), 3.0, 1e-3)
        assert D.geodesic_residual(sf, traj) < 1e-4


class TestChargedMotion:
    def test_zero_charge_reduces_to_geodesic(self):
        sf = SpaceForm(0, 2.0)
        p0 = np.array([1.2, 0.3, 0.8])
        v0 = unit_frame_velocity(sf, p0, [0.1, 0.8, -0.3])
        a = D.integrate_charged(sf, p0, v0, 0.0, contact_maxwell(1.0), 1.0, 1e-3)
        rhs = D.lorentz_ode(sf, 0.0, contact_maxwell(1.0))
        _, acc = rhs(p0, v0)
        gam = G.christoffels_fd(sf, p0)
        assert np.allclose(acc, -np.einsum("mnr,n,r->m", gam, v0, v0))
        assert not a.domain_exit

    def test_force_orthogonal_to_velocity(self):
        # antisymmetry of the force form conserves speed for any charge
        sf = SpaceForm(0, 2.0)
        rhs_q = D.lorentz_ode(sf, 0.9, contact_maxwell(1.0))
        rhs_0 = D.lorentz_ode(sf, 0.0, contact_maxwell(1.0))
        for p in G.random_points(sf, 5, margin=0.4):
            v = unit_frame_velocity(sf, p, [0.2, -0.5, 0.7])
            force = rhs_q(p, v)[1] - rhs_0(p, v)[1]
            g = G.metric_at(sf, p)
            assert abs(v @ g @ force) < 1e-12

    def test_speed_conserved_with_charge(self):
        sf = SpaceForm(0, 2.0)
        p0 = np.array([1.2, 0.3, 0.8])
        v0 = unit_frame_velocity(sf, p0, [0.1, 0.8, -0.3])
        traj = D.integrate_charged(sf, p0, v0, 0.9, contact_maxwell(1.0),
                                   5.0, 1e-3)
        sp = traj.monitors["speed2"]
        assert np.max(np.abs(sp - sp[0])) < 1e-6

    def test_charge_flip_mirror(self):
        # the chart map (x1, x2, x3) -> (x1, -x2, -x3) is an isometry fixing
        # p0 = (x1, 0, 0); it flips e1, e2, keeps e3, and reverses the
        # contact two-form, so flipping the charge with mirrored initial
        # data mirrors the whole trajectory
        sf = SpaceForm(0, 2.0)
        p0 = np.array([1.1, 0.0, 0.0])
        vf = np.array([0.3, 0.8, 0.5])
        t1 = D.integrate_charged(sf, p0, unit_frame_velocity(sf, p0, vf),
                                 0.7, contact_maxwell(1.0), 1.0, 1e-3)
        vf_mirror = np.array([-vf[0], -vf[1], vf[2]])
        t2 = D.integrate_charged(sf, p0, unit_frame_velocity(sf, p0, vf_mirror),
                                 -0.7, contact_maxwell(1.0), 1.0, 1e-3)
        mirrored = t1.positions * np.array([1.0, -1.0, -1.0])
        assert np.max(np.abs(t2.positions - mirrored)) < 1e-8


class TestIntegrator:
    def test_zero_horizon_single_sample(self):
        sf = SpaceForm(0, 1.0)
        p0 = np.array([1.0, 0.0, 0.0])
        traj = D.integrate_charged(sf, p0, np.array([0.0, 1.0, 0.0]), 0.0,
                                   np.zeros((3, 3)), 0.0, 1e-3)
        assert len(traj) == 1

    def test_dt_validation(self):
        sf = SpaceForm(0, 1.0)
        with pytest.raises(ValueError):
            D.integrate_charged(sf, [1, 0, 0], [0, 1, 0], 0.0,
                                np.zeros((3, 3)), 1.0, 0.0)

    def test_fourth_order_convergence(self):
        sf = SpaceForm(0, 2.0)
        p0 = np.array([1.2, 0.3, 0.8])
        v0 = unit_frame_velocity(sf, p0, [0.1, 0.8, -0.3])

        def endpoint(dt):
            return D.integrate_charged(sf, p0, v0, 0.5, contact_maxwell(1.0),
                                       1.0, dt).positions[-1]

        ref = endpoint(1.0 / 8192.0)
        e1 = np.max(np.abs(endpoint(1.0 / 128.0) - ref))
        e2 = np.max(np.abs(endpoint(1.0 / 256.0) - ref))
        assert 8.0 < e1 / e2 < 40.0

    def test_domain_exit_partial_trajectory(self):
        # aim straight at the polar singularity
        sf = SpaceForm(0, 1.0)
        p0 = np.array([0.5, 0.0, 0.0])
        v0 = unit_frame_velocity(sf, p0, [0.0, -0.9, 0.4])
        v0 = np.array([-1.0, 0.0, 0.0])
        traj = D.integrate_charged(sf, p0, v0, 0.0, np.zeros((3, 3)), 5.0, 1e-3)
        assert traj.domain_exit
        assert 0 < len(traj) < 5001


class TestDiracFlow:
    def setup_method(self):
        self.sf = SpaceForm(0, 2.0)
        self.field = K.explicit_solution(self.sf, "S0", 1.0, 0.5 + 0.3j)
        self.p0 = np.array([1.2, 0.4, 2.2])

    def test_charged_orbit_equation(self):
        charge = D.magnetic_charge(self.field, self.p0)
        traj = D.dirac_flow(self.field, self.p0, 5.0, 1e-3)
        assert D.ode_residual(self.sf, traj, charge, contact_maxwell(1.0)) < 1e-4

    def test_reeb_component_conserved(self):
        traj = D.dirac_flow(self.field, self.p0, 5.0, 1e-3)
        j1 = traj.monitors["J1"]
        assert np.max(np.abs(j1 - j1[0])) < 1e-8

    def test_invariant_norm_constant_along_flow(self):
        traj = D.dirac_flow(self.field, self.p0, 2.0, 1e-3)
        norms = traj.monitors["field_norm"]
        assert np.max(np.abs(norms - norms[0])) < 1e-10

    def test_matches_lorentz_pipeline(self):
        charge = D.magnetic_charge(self.field, self.p0)
        flow = D.dirac_flow(self.field, self.p0, 5.0, 1e-3)
        lz = D.integrate_charged(self.sf, self.p0, flow.velocities[0], charge,
                                 contact_maxwell(1.0), 5.0, 1e-3)
        n = min(len(flow), len(lz))
        assert np.max(np.abs(flow.positions[:n] - lz.positions[:n])) < 1e-4

    def test_lorentzian_flow(self):
        sf = SpaceForm(1, 0.0)  # b = 1/4
        field = K.explicit_solution(sf, "S0", 1.0, 0.4 - 0.6j)
        p0 = np.array([1.0, 0.5, 1.0])
        charge = D.magnetic_charge(field, p0)
        traj = D.dirac_flow(field, p0, 5.0, 1e-3)
        assert D.ode_residual(sf, traj, charge, contact_maxwell(1.0)) < 1e-4
        j1 = traj.monitors["J1"]
        assert np.max(np.abs(j1 - j1[0])) < 1e-8

    def test_reeb_orbit_for_eigen_constants(self):
        field = K.explicit_solution(self.sf, "S0", 1.0, 1.0)
        traj = D.dirac_flow(field, self.p0, 2.0, 1e-3)
        assert np.max(np.abs(traj.positions[:, 0] - self.p0[0])) < 1e-12
        assert np.max(np.abs(traj.positions[:, 1] - self.p0[1])) < 1e-12
        x3 = traj.positions[:, 2]
        rate = np.diff(x3) / 1e-3
        assert np.max(np.abs(rate - rate[0])) < 1e-9

    def test_zero_current_rejected(self):
        zero = K.SpinorField(self.sf, lambda x: np.zeros(2, dtype=complex))
        with pytest.raises(ValueError):
            D.dirac_flow(zero, self.p0, 1.0, 1e-3)

    def test_frame_derivative_relations_along_flow(self):
        # e2(J_1) = (-2a + (-1)^r) J_3 and e3(J_1) = (2a - (-1)^r) J_2
        sf, field = self.sf, self.field
        a = field.stype.a
        traj = D.dirac_flow(field, self.p0, 1.0, 1e-2)

        def j_low(y):
            return sf.eta_diag * dirac_current(field.value(y), r=sf.r)

        for x in traj.positions[::20]:
            j = j_low(x)
            d2 = G.directional_derivative(sf, j_low, 1, x)[0]
            d3 = G.directional_derivative(sf, j_low, 2, x)[0]
            assert abs(d2 - (-2 * a + sf.eps) * j[2]) < 1e-5
            assert abs(d3 - (2 * a - sf.eps) * j[1]) < 1e-5


class TestGeodesicCorollary:
    def test_orthogonal_configuration_flows_geodesically(self):
        sf = SpaceForm(0, 2.0)
        p0 = np.array([1.2, 0.4, 2.2])
        c1, c2, j1_val = D.orthogonal_start_constants(sf, p0)
        assert j1_val < 1e-10
        field = K.explicit_solution(sf, "S0", c1, c2)
        res = D.geodesic_check(field, p0, 3.0, 1e-3)
        assert res["applicable"]
        assert res["j1_max_drift"] < 1e-7
        assert res["geodesic_residual"] < 1e-4

    def test_eigen_control_skipped(self):
        sf = SpaceForm(0, 2.0)
        field = K.explicit_solution(sf, "S0", 1.0, 1.0)
        res = D.geodesic_check(field, np.array([1.2, 0.4, 2.2]), 1.0)
        assert not res["applicable"]
        assert "g(J, xi)" in res["reason"]

    def test_killing_spinor_case_every_flow_geodesic(self):
        # b = 0 at H = (-1)^r: the force term vanishes for any start
        sf = SpaceForm(0, 1.0)
        field = K.explicit_solution(sf, "S0", 1.0, 0.4 + 0.2j)
        assert field.stype.b == 0.0
        traj = D.dirac_flow(field, np.array([1.2, 0.4, 2.2]), 3.0, 1e-3)
        assert D.geodesic_residual(sf, traj) < 1e-4


class TestCsv:
    def test_format_and_roundtrip(self, tmp_path):
        sf = SpaceForm(0, 2.0)
        field = K.explicit_solution(sf, "S0", 1.0, 0.5 + 0.3j)
        traj = D.dirac_flow(field, np.array([1.2, 0.4, 2.2]), 0.05, 1e-3)
        path = os.path.join(tmp_path, "traj.csv")
        D.write_csv(path, traj)
        with open(path) as fh:
            lines = fh.read().strip().split("\n")
        assert lines[0] == "t,x1,x2,x3,v1,v2,v3,speed2,J1"
        assert len(lines) == len(traj) + 1
        row = lines[1].split(",")
        assert len(row) == 9
        data = np.array([[float(v) for v in line.split(",")]
                         for line in lines[1:]])
        assert np.allclose(data[:, 1:4], traj.positions, atol=1e-16)
        # 17 significant digits survive the round trip exactly
        assert data[2, 1] == traj.positions[2][0]
