from marshmallow import Schema, ValidationError, fields, post_load, validate, validates, validates_schema

from src.models.dde import CATALOGED_SHIFTS
from src.models.function_spec import Family, FunctionSpec
from src.models.problem import GridSpace
from src.models.sweep import StepPolicy
from src.services.special_families import NODE_KINDS
from src.utils.helpers import parse_interval, parse_params

REQUIRED_PARAMS = {
    Family.F01: {'c'},
    Family.F11: {'a', 'c'},
    Family.F21: {'a', 'b', 'c'},
    Family.F20: {'a', 'b'},
}


def check_params(family, params):
    """Each family takes exactly its own parameters"""
    family = Family(family)
    missing = REQUIRED_PARAMS[family] - set(params)
    extra = set(params) - REQUIRED_PARAMS[family]
    if missing:
        raise ValidationError(f'{family.value} needs {", ".join(sorted(missing))}', 'params')
    if extra:
        raise ValidationError(f'{family.value} does not take {", ".join(sorted(extra))}', 'params')


def check_shifts(family, shifts):
    """Every --dde names a cataloged direction; 2F0 problems are solved through 1F1"""
    family = Family(family)
    catalog = CATALOGED_SHIFTS[Family.F11 if family == Family.F20 else family]
    for shift in shifts:
        if tuple(shift) not in catalog:
            known = ", ".join(",".join(str(s) for s in entry) for entry in catalog)
            raise ValidationError(f'{shift} is not a cataloged DDE for {family.value} (known: {known})', 'dde')


class ParamsField(fields.Field):
    """'a=-50,c=1' on the command line"""

    def _deserialize(self, value, attr, data, **kwargs):
        if isinstance(value, dict):
            return {k: float(v) for k, v in value.items()}
        try:
            return parse_params(value)
        except ValueError as e:
            raise ValidationError(str(e)) from e


class IntervalField(fields.Field):
    """'lo,hi' with inf allowed"""

    def _deserialize(self, value, attr, data, **kwargs):
        if isinstance(value, (tuple, list)) and len(value) == 2:
            value = f'{value[0]},{value[1]}'
        try:
            return parse_interval(value)
        except ValueError as e:
            raise ValidationError(str(e)) from e

    def _serialize(self, value, attr, obj, **kwargs):
        return None if value is None else list(value)


class DDEShiftField(fields.Field):
    """'k[,l][,m]' as a tuple of ints"""

    def _deserialize(self, value, attr, data, **kwargs):
        if isinstance(value, (tuple, list)):
            parts = value
        else:
            parts = [p for p in str(value).strip('()').split(',') if p.strip()]
        try:
            return tuple(int(p) for p in parts)
        except ValueError as e:
            raise ValidationError(f"DDE must look like k[,l][,m], got '{value}'") from e


class FunctionSpecSchema(Schema):
    family = fields.Str(required=True, validate=validate.OneOf([f.value for f in Family]))
    params = ParamsField(required=True)

    @validates_schema
    def validate_params(self, data, **kwargs):
        check_params(data['family'], data['params'])

    @post_load
    def make_spec(self, data, **kwargs):
        return FunctionSpec(Family(data['family']), **data['params'])


class ProblemArgsSchema(Schema):
    """Arguments shared by the commands that solve one function on one interval"""
    family = fields.Str(required=True, validate=validate.OneOf([f.value for f in Family]))
    params = ParamsField(required=True)
    interval = IntervalField(required=True)
    arg_negated = fields.Bool(load_default=False)
    format = fields.Str(load_default='csv', validate=validate.OneOf(['csv', 'json']))

    @validates_schema
    def validate_spec(self, data, **kwargs):
        check_params(data['family'], data['params'])
        if data.get('arg_negated') and data['family'] != Family.F01.value:
            raise ValidationError('--arg-negated only applies to 0F1', 'arg_negated')

    @post_load
    def make_spec(self, data, **kwargs):
        data['spec'] = FunctionSpec(Family(data.pop('family')), **data.pop('params'))
        return data


class SweepArgsSchema(ProblemArgsSchema):
    tol = fields.Float(load_default=None, validate=validate.Range(min=0, min_inclusive=False))
    max_iter = fields.Int(load_default=None, validate=validate.Range(min=1))
    step_policy = fields.Str(load_default=None, validate=validate.OneOf([p.value for p in StepPolicy]))


class FindArgsSchema(SweepArgsSchema):
    dde = fields.List(DDEShiftField(), load_default=list)

    @validates_schema
    def validate_shifts(self, data, **kwargs):
        check_shifts(data['family'], data.get('dde', ()))


class CompareArgsSchema(SweepArgsSchema):
    dde = fields.List(DDEShiftField(), required=True)

    @validates('dde')
    def validate_dde(self, value, **kwargs):
        if len(value) < 2:
            raise ValidationError('compare needs at least two --dde values')

    @validates_schema
    def validate_shifts(self, data, **kwargs):
        check_shifts(data['family'], data.get('dde', ()))


class OracleArgsSchema(ProblemArgsSchema):
    grid = fields.Int(load_default=None, validate=validate.Range(min=2))
    grid_space = fields.Str(load_default=GridSpace.UNIFORM_Z.value,
                            validate=validate.OneOf([g.value for g in GridSpace]))


class DescribeArgsSchema(ProblemArgsSchema):
    dde = DDEShiftField(required=True)
    points = fields.Int(load_default=20, validate=validate.Range(min=2))

    @validates_schema
    def validate_shift(self, data, **kwargs):
        check_shifts(data['family'], [data['dde']] if 'dde' in data else [])


class NodesArgsSchema(Schema):
    kind = fields.Str(required=True, validate=validate.OneOf(NODE_KINDS))
    n = fields.Int(required=True, validate=validate.Range(min=1))
    alpha = fields.Float(load_default=0.0)
    beta = fields.Float(load_default=0.0)
    nu = fields.Float(load_default=0.0)
    format = fields.Str(load_default='csv', validate=validate.OneOf(['csv', 'json']))

    @validates_schema
    def validate_family_parameters(self, data, **kwargs):
        if data['kind'] in ('laguerre', 'jacobi') and data['alpha'] <= -1:
            raise ValidationError('alpha must be greater than -1', 'alpha')
        if data['kind'] == 'jacobi' and data['beta'] <= -1:
            raise ValidationError('beta must be greater than -1', 'beta')
        if data['kind'] == 'bessel' and data['nu'] <= -1:
            raise ValidationError('nu must be greater than -1', 'nu')
