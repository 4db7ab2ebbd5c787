"""Preference inference from image sequences."""

import json

from . import _vpi
from ._vpi import VpiError

__all__ = [
    "VpiError",
    "generate_episode",
    "render",
    "infer",
    "sr_vrd",
    "sr_prd",
    "parse_vrd_response",
    "run_benchmark",
    "report_text",
]


def _dump(episode):
    return episode if isinstance(episode, str) else json.dumps(episode)


def generate_episode(task, preference, seed, n_images=0):
    return json.loads(_vpi.generate_episode(task, preference, seed, n_images))


def render(episode, index, annotate=False):
    return _vpi.render(_dump(episode), index, annotate)


def infer(episode, method, backend="oracle"):
    return json.loads(_vpi.infer(_dump(episode), method, backend))


def sr_vrd(predicted, truth):
    return _vpi.sr_vrd(json.dumps(predicted), json.dumps(truth))


def sr_prd(predicted, truth):
    return _vpi.sr_prd(list(predicted), list(truth))


def parse_vrd_response(text):
    return json.loads(_vpi.parse_vrd_response(text))


def run_benchmark(config_text, audit_dir=""):
    return _vpi.run_benchmark(config_text, audit_dir)


def report_text(csv):
    return _vpi.report_text(csv)
