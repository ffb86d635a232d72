# core/exceptions.py
"""
Domain errors. Shaped like DRF's APIException: each class has a default
detail and code, and an exit code family used by the management commands.
"""


class SpiderWebError(Exception):
    exit_code = 1
    default_detail = 'Spider web pipeline error.'
    default_code = 'error'

    def __init__(self, detail=None, code=None, **context):
        self.detail = detail if detail is not None else self.default_detail
        self.code = code if code is not None else self.default_code
        self.context = context
        super().__init__(self.detail)

    def __str__(self):
        return str(self.detail)


class ConfigError(SpiderWebError):
    exit_code = 2
    default_detail = 'Invalid run configuration.'
    default_code = 'config_error'


class LadderError(SpiderWebError):
    exit_code = 3
    default_detail = 'Radius ladder error.'
    default_code = 'ladder_error'


class EvaluationOverflow(LadderError):
    default_detail = 'Modulus exceeded the representable range.'
    default_code = 'overflow'


class InvalidRadius(LadderError):
    default_detail = 'No passing radius certificate for this ladder.'
    default_code = 'invalid_radius'


class LadderTooShort(LadderError):
    default_detail = 'Ladder is too short for the requested level and depth.'
    default_code = 'ladder_too_short'


class OriginNotInComplement(LadderError):
    default_detail = 'The origin cell is not in the complement of the level set.'
    default_code = 'origin_not_in_complement'


class UnboundedHole(LadderError):
    default_detail = 'The hole touches the grid boundary.'
    default_code = 'unbounded_hole'


class DisjointnessNotFound(LadderError):
    default_detail = 'No stride separates the stored loops.'
    default_code = 'disjointness_not_found'


class InsufficientLoops(LadderError):
    default_detail = 'Not enough loops at this stride.'
    default_code = 'insufficient_loops'


class BasePointOnCurve(LadderError):
    default_detail = 'Base point lies on the image curve.'
    default_code = 'base_point_on_curve'


class ImageNotClosed(LadderError):
    default_detail = 'Image curve is not resolved by the sampling.'
    default_code = 'image_not_closed'


class ConstructionError(SpiderWebError):
    exit_code = 4
    default_detail = 'Orbit construction failed.'
    default_code = 'construction_error'


class MsetInsufficient(ConstructionError):
    default_detail = 'Expanding indices required by this orbit type are not available.'
    default_code = 'mset_insufficient'


class NoBranchAvailable(ConstructionError):
    default_detail = 'No branching decision at this step.'
    default_code = 'no_branch_available'


class RefinementExhausted(ConstructionError):
    default_detail = 'No surviving region chain at the maximum subdivision.'
    default_code = 'refinement_exhausted'


class ArtifactIOError(SpiderWebError):
    exit_code = 5
    default_detail = 'Could not read or write an artifact.'
    default_code = 'io_error'
