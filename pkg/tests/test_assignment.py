import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from faithdp import InternalInvariantError, InvalidConfigError, InvalidInputError
from faithdp.assignment import assign_labels, center_potential, select_centers
from faithdp.core import ROOT, LeadingStructure
from faithdp.distances import EuclideanSource


def test_center_potential_examples():
    assert center_potential([1, 2], [3, 0.5]).tolist() == [3.0, 1.0]
    assert center_potential([4, 5], [0, 1])[0] == 0.0
    with pytest.raises(InvalidInputError):
        center_potential([1, 2], [1])


def test_center_potential_line():
    e1, e4 = math.exp(-1), math.exp(-4)
    gamma = center_potential([e1 + e4, 2 * e1, e1 + e4], [1, 1, 1])
    assert int(np.argmax(gamma)) == 1


def test_select_explicit():
    assert select_centers([3, 1, 9], 2).tolist() == [2, 0]
    assert select_centers([5, 5, 1], 1).tolist() == [0]
    with pytest.raises(InvalidConfigError):
        select_centers([1, 2], 3)


def test_select_auto_ratio_gap():
    # consecutive ratios: 100/99, 99/98, 98/1, 1/0.9 -> cut after the third
    assert select_centers([100, 99, 98, 1, 0.9]).tolist() == [0, 1, 2]


def test_select_auto_minimum_two():
    assert len(select_centers([1000, 1, 0.5, 0.49])) == 2
    assert len(select_centers([5.0, 1.0])) == 2
    assert len(select_centers([5.0])) == 1


def test_select_auto_zero_tail():
    assert select_centers([9, 8, 0, 0, 0]).tolist() == [0, 1]


@given(
    st.lists(st.floats(0.01, 1e3), min_size=3, max_size=40),
    st.floats(1e-3, 1e3),
    st.integers(1, 3),
)
def test_select_scale_equivariant(gamma, scale, C):
    g = np.array(gamma)
    assert set(select_centers(g, C)) == set(select_centers(g * scale, C))


def test_assign_line():
    lead = LeadingStructure(np.array([1, ROOT, 1]), np.array([1.0, 1.0, 1.0]))
    res = assign_labels(lead, np.array([0.39, 0.74, 0.39]), [1])
    assert res.labels.tolist() == [0, 0, 0]


def test_assign_two_pairs():
    # pairs {0,1} and {2,3}, far apart; 1 and 2 are the denser member of each
    rho = np.array([1.0, 2.0, 3.0, 1.5])
    lead = LeadingStructure(np.array([1, 2, ROOT, 2]), np.array([1.0, 10.0, 11.0, 1.0]))
    res = assign_labels(lead, rho, [2, 1])
    assert res.labels.tolist() == [1, 1, 0, 0]


def test_assign_every_point_a_center():
    rho = np.array([1.0, 3.0, 2.0])
    lead = LeadingStructure(np.array([2, ROOT, 1]), np.array([1.0, 2.0, 1.0]))
    centers = [2, 0, 1]
    res = assign_labels(lead, rho, centers)
    assert res.labels[centers].tolist() == [0, 1, 2]


def test_root_not_center_joins_nearest_center():
    X = np.array([[0.0], [1.0], [5.0], [9.0]])
    rho = np.array([2.0, 3.0, 1.0, 1.5])
    lead = LeadingStructure(np.array([1, ROOT, 1, 2]), np.array([1.0, 8.0, 4.0, 4.0]))
    res = assign_labels(lead, rho, [3, 0], source=EuclideanSource(X))
    assert res.labels.tolist() == [1, 1, 1, 0]
    with pytest.raises(InvalidInputError):
        assign_labels(lead, rho, [3, 0])


def test_incomplete_mu_detected():
    rho = np.array([5.0, 4, 3, 2, 1])
    # 2 depends on the sparser point 3, which is still unlabelled when 2 is visited
    lead = LeadingStructure(np.array([ROOT, 0, 3, 2, 3]), np.zeros(5))
    with pytest.raises(InternalInvariantError):
        assign_labels(lead, rho, [0])


def test_rejects_duplicate_centers():
    lead = LeadingStructure(np.array([ROOT, 0]), np.zeros(2))
    with pytest.raises(InvalidInputError):
        assign_labels(lead, np.array([2.0, 1.0]), [0, 0])
