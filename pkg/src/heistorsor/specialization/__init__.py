"""Specialization at rational points, quadratic-field tests and class groups."""

from heistorsor.specialization.bqf import ClassGroupBQF, class_group_bqf, n_rank
from heistorsor.specialization.pipeline import (
    CensusReport,
    SpecializationRecord,
    SSet,
    census,
    connectedness_test,
    enumerate_points,
    specialize,
    unramified_and_split_tests,
)
from heistorsor.specialization.quadratic import QuadElt, QuadField, valuation_profile

__all__ = [
    "CensusReport",
    "ClassGroupBQF",
    "QuadElt",
    "QuadField",
    "SSet",
    "SpecializationRecord",
    "census",
    "class_group_bqf",
    "connectedness_test",
    "enumerate_points",
    "n_rank",
    "specialize",
    "unramified_and_split_tests",
    "valuation_profile",
]
