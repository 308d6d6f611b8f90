"""Systems advancing protocol runs tick by tick."""

from two_photon_cqed.systems.cavity_pass import CavityPassSystem
from two_photon_cqed.systems.detection import DetectionSystem
from two_photon_cqed.systems.error_handling import ErrorHandlingSystem
from two_photon_cqed.systems.scoring import ScoringSystem

__all__ = ["CavityPassSystem", "DetectionSystem", "ErrorHandlingSystem", "ScoringSystem"]
