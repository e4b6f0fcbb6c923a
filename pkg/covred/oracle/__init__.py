"""Blow-up oracle and planted instances"""

from covred.oracle.blowup import fundamental_model, blow_up, separate_fibers, verify_instance
from covred.oracle.planted import planted_instances, run_planted

__all__ = ['fundamental_model', 'blow_up', 'separate_fibers', 'verify_instance',
           'planted_instances', 'run_planted']
