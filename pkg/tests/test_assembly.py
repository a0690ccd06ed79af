"""Wrench transforms, platform kinematics and assembly-level statics."""

import math

import numpy as np
import pytest

from free_statics import (
    Assembly,
    Deformation,
    Placement,
    PlatformState,
    Wrench6,
    assembly_jacobian,
    fluid_jacobian,
    map_platform_state,
    net_wrench,
    project_wrench,
    wrench_transform,
)
from free_statics.errors import (
    DimensionMismatch,
    EmptySelection,
    KinematicsInvalid,
    NegativePressure,
    NonUnitAxis,
    PressureLimit,
    ValidationError,
)
from free_statics.free_core import FreeDesign

from conftest import random_assembly, random_valid_state

P_MAX = 103.4e3
D48 = FreeDesign("ccw48", 0.1, 0.005, math.radians(48.0), P_MAX)
DM48 = FreeDesign("cw48", 0.1, 0.005, math.radians(-48.0), P_MAX)
DM85 = FreeDesign("ext85", 0.1, 0.005, math.radians(-85.0), P_MAX)
Z_AXIS = (0.0, 0.0, 1.0)


def paper_assembly():
    return Assembly(
        frees=(
            (D48, Placement(d=(0.013, 0.0, 0.0), axis=Z_AXIS)),
            (DM48, Placement(d=(-0.006, 0.011, 0.0), axis=Z_AXIS)),
            (DM85, Placement(d=(-0.006, -0.011, 0.0), axis=Z_AXIS)),
        ),
        dofs=("Fz", "Mz"),
    )


class TestWrenchTransform:
    def test_printed_rig_matrices(self):
        # The three transforms of the experimental rig, exactly.
        t1 = wrench_transform(Placement(d=(0.013, 0.0, 0.0), axis=Z_AXIS))
        expected1 = np.array(
            [[0, 0, 1, 0, -0.013, 0], [0, 0, 0, 0, 0, 1]], dtype=float
        ).T
        assert np.array_equal(t1, expected1)
        t2 = wrench_transform(Placement(d=(-0.006, 0.011, 0.0), axis=Z_AXIS))
        expected2 = np.array(
            [[0, 0, 1, 0.011, 0.006, 0], [0, 0, 0, 0, 0, 1]], dtype=float
        ).T
        assert np.array_equal(t2, expected2)
        t3 = wrench_transform(Placement(d=(-0.006, -0.011, 0.0), axis=Z_AXIS))
        expected3 = np.array(
            [[0, 0, 1, -0.011, 0.006, 0], [0, 0, 0, 0, 0, 1]], dtype=float
        ).T
        assert np.array_equal(t3, expected3)

    def test_origin_attachment_has_no_lever_arm(self):
        t = wrench_transform(Placement(d=(0.0, 0.0, 0.0), axis=Z_AXIS))
        assert np.array_equal(t[:, 0], [0, 0, 1, 0, 0, 0])
        assert np.array_equal(t[:, 1], [0, 0, 0, 0, 0, 1])

    def test_block_structure(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            axis = rng.normal(size=3)
            axis /= np.linalg.norm(axis)
            d = rng.uniform(-0.1, 0.1, 3)
            t = wrench_transform(Placement(d=d, axis=axis))
            assert np.array_equal(t[0:3, 1], np.zeros(3))  # moment column carries no force
            assert np.allclose(t[0:3, 0], axis, rtol=0, atol=0)
            assert np.allclose(t[3:6, 0], np.cross(d, axis), rtol=0, atol=0)
            assert np.allclose(t[3:6, 1], axis, rtol=0, atol=0)

    def test_non_unit_axis_rejected(self):
        with pytest.raises(NonUnitAxis):
            Placement(d=(0.0, 0.0, 0.0), axis=(0.0, 0.0, 1.1))


class TestPlatformMapping:
    def test_identity_at_origin(self):
        qs = map_platform_state(paper_assembly(), PlatformState())
        assert all(q == Deformation(0.0, 0.0) for q in qs)

    def test_coaxial_passes_state_through(self):
        state = PlatformState(dl=0.005, dphi=math.radians(20.0))
        qs = map_platform_state(paper_assembly(), state)
        for q in qs:
            assert q.dl == 0.005
            assert q.dphi == pytest.approx(0.3490658503988659, rel=1e-15)

    def test_invalid_state_names_the_actuator(self):
        with pytest.raises(KinematicsInvalid) as err:
            map_platform_state(paper_assembly(), PlatformState(dl=0.06))
        assert err.value.verdict == "OverExtended"
        assert err.value.free_name == "ccw48"

    def test_assembly_invariants(self):
        with pytest.raises(ValidationError):
            Assembly(frees=())
        with pytest.raises(ValidationError):
            Assembly(
                frees=(
                    (D48, Placement(d=(0.0, 0.0, 0.0), axis=Z_AXIS)),
                    (D48, Placement(d=(0.0, 0.0, 0.0), axis=Z_AXIS)),
                )
            )
        with pytest.raises(ValidationError):
            Assembly(
                frees=((D48, Placement(d=(0.0, 0.0, 0.0), axis=Z_AXIS)),),
                kinematic_map="nope",
            )


class TestAssemblyJacobian:
    def test_paper_rig_row_entries(self):
        rows = assembly_jacobian(paper_assembly(), PlatformState())
        local = fluid_jacobian(D48, Deformation())
        assert rows.shape == (3, 6)
        assert rows[0, 2] == local.dv_dl
        assert rows[0, 5] == local.dv_dphi
        assert rows[0, 2] == pytest.approx(-4.8808952607977422e-05, rel=1e-14)
        assert rows[0, 5] == pytest.approx(7.0717568270715791e-07, rel=1e-14)
        # lever arm of the first actuator only bends about y
        assert rows[0, 3] == 0.0
        assert rows[0, 4] == pytest.approx(-0.013 * local.dv_dl, rel=1e-14)

    def test_axis_aligned_single_free_only_touches_fz_mz(self):
        assembly = Assembly(
            frees=((D48, Placement(d=(0.0, 0.0, 0.0), axis=Z_AXIS)),), dofs=("Fz", "Mz")
        )
        rows = assembly_jacobian(assembly, PlatformState())
        assert np.array_equal(rows[0, [0, 1, 3, 4]], np.zeros(4))
        assert rows[0, 2] != 0.0 and rows[0, 5] != 0.0

    def test_mirrored_pair_negates_axial_moment(self):
        mirrored = Assembly(
            frees=(
                (D48, Placement(d=(0.01, 0.0, 0.0), axis=Z_AXIS)),
                (DM48, Placement(d=(-0.01, 0.0, 0.0), axis=Z_AXIS)),
            )
        )
        rows = assembly_jacobian(mirrored, PlatformState())
        assert rows[0, 2] == rows[1, 2]
        assert rows[0, 5] == -rows[1, 5]


class TestNetWrench:
    def test_zero_pressure_zero_wrench(self):
        w = net_wrench(paper_assembly(), PlatformState(), [0.0, 0.0, 0.0])
        assert np.array_equal(w.as_array(), np.zeros(6))

    def test_full_pressure_projected_values(self):
        w = net_wrench(paper_assembly(), PlatformState(), [P_MAX] * 3)
        fz, mz = project_wrench(w, ("Fz", "Mz"))
        assert fz == pytest.approx(-2.0969952425513139, rel=1e-12)
        assert mz == pytest.approx(-0.0071049692463504193, rel=1e-12)

    def test_superposition(self):
        rng = np.random.default_rng(23)
        assembly = paper_assembly()
        state = PlatformState(dl=0.002, dphi=0.1)
        for _ in range(10):
            pa = rng.uniform(0.0, 0.5, 3) * P_MAX
            pb = rng.uniform(0.0, 0.5, 3) * P_MAX
            combined = net_wrench(assembly, state, pa + pb).as_array()
            split = (
                net_wrench(assembly, state, pa).as_array()
                + net_wrench(assembly, state, pb).as_array()
            )
            assert np.allclose(combined, split, rtol=1e-12, atol=1e-300)

    def test_pressure_box_enforced_per_actuator(self):
        with pytest.raises(NegativePressure, match="cw48"):
            net_wrench(paper_assembly(), PlatformState(), [0.0, -1.0, 0.0])
        with pytest.raises(PressureLimit, match="ext85"):
            net_wrench(paper_assembly(), PlatformState(), [0.0, 0.0, P_MAX * 1.01])
        with pytest.raises(DimensionMismatch):
            net_wrench(paper_assembly(), PlatformState(), [0.0, 0.0])

    def test_transform_sum_equals_stacked_jacobian(self):
        # Per-actuator transforms summed one by one agree with the stacked form.
        rng = np.random.default_rng(29)
        for _ in range(20):
            assembly = random_assembly(rng)
            state = random_valid_state(rng, assembly)
            pressures = rng.uniform(0.0, 1.0, len(assembly.frees)) * assembly.p_max()
            total = np.zeros(6)
            for (design, placement), q, p in zip(
                assembly.frees, map_platform_state(assembly, state), pressures
            ):
                row = fluid_jacobian(design, q).as_array()
                total += wrench_transform(placement) @ (row * p)
            stacked = assembly_jacobian(assembly, state).T @ pressures
            assert np.allclose(total, stacked, rtol=1e-12, atol=1e-300)

    def test_frame_origin_shift_moves_only_moments(self):
        rng = np.random.default_rng(31)
        for _ in range(10):
            assembly = random_assembly(rng, n=4)
            state = random_valid_state(rng, assembly)
            pressures = rng.uniform(0.0, 1.0, 4) * assembly.p_max()
            shift = rng.uniform(-0.05, 0.05, 3)
            shifted = Assembly(
                frees=tuple(
                    (design, Placement(d=placement.d - shift, axis=placement.axis))
                    for design, placement in assembly.frees
                ),
                dofs=assembly.dofs,
            )
            base = net_wrench(assembly, state, pressures)
            moved = net_wrench(shifted, state, pressures)
            assert np.allclose(base.force, moved.force, rtol=1e-12, atol=1e-300)
            expected = base.moment + np.cross(-shift, base.force)
            assert np.allclose(moved.moment, expected, rtol=1e-10, atol=1e-16)

    def test_mirrored_pair_cancels_axial_moment(self):
        # Equal pressures on the mirrored pair leave only the third
        # actuator's twisting moment.
        rng = np.random.default_rng(37)
        assembly = paper_assembly()
        for _ in range(10):
            dl = rng.uniform(-0.01, 0.02)
            pair = rng.uniform(0.0, P_MAX)
            third = rng.uniform(0.0, P_MAX)
            state = PlatformState(dl=dl)
            w = net_wrench(assembly, state, [pair, pair, third])
            q = map_platform_state(assembly, state)[2]
            alone = fluid_jacobian(DM85, q).dv_dphi * third
            assert w.moment[2] == pytest.approx(alone, rel=1e-12, abs=1e-300)


class TestProjectWrench:
    def test_component_extraction(self):
        w = np.array([1.0, 2.0, 3.0, 4.0, 5.0, 6.0])
        assert np.array_equal(project_wrench(w, ("Fz", "Mz")), [3.0, 6.0])

    def test_identity_on_all_six(self):
        w = Wrench6(force=(1.0, 2.0, 3.0), moment=(4.0, 5.0, 6.0))
        full = ("Fx", "Fy", "Fz", "Mx", "My", "Mz")
        assert np.array_equal(project_wrench(w, full), w.as_array())

    def test_empty_selection(self):
        with pytest.raises(EmptySelection):
            project_wrench(np.zeros(6), ())

    def test_unknown_component(self):
        with pytest.raises(ValidationError):
            project_wrench(np.zeros(6), ("Fz", "Qq"))
