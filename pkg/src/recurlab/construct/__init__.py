"""Builders of symbolic points with prescribed return-time sets."""

from .group import TraceG, build_group, check_group_trace
from .n0 import CheckReport, TraceN0, build_n0, check_n0_trace, trace_word_return
from .refine import RefineCertificate, refine_neighborhood
