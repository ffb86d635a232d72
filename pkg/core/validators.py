import re
from django.core.exceptions import ValidationError
from django.utils.translation import gettext as _

GRID_PATTERN = re.compile(r'^\s*([^,]+),([^,]+),([^,]+),([^,]+)\s*$')
PARAM_PATTERN = re.compile(r'^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.+?)\s*$')


def parse_number(text: str):
    """Parse a real or complex literal ('1', '-0.5', '0.5+0.2j')."""
    value = text.strip().replace(' ', '')
    try:
        number = complex(value)
    except ValueError:
        raise ValidationError(_("'%(value)s' is not a number."), params={'value': text})
    if number.imag == 0 and 'j' not in value.lower():
        return number.real
    return number


def parse_grid(text: str) -> dict:
    """Parse 'cx,cy,hw,res' into a grid mapping."""
    match = GRID_PATTERN.match(text or '')
    if not match:
        raise ValidationError(_("Grid must look like 'cx,cy,hw,res'."))
    cx, cy, hw, res = match.groups()
    try:
        grid = {
            'center_re': float(cx),
            'center_im': float(cy),
            'half_width': float(hw),
            'resolution': int(res),
        }
    except ValueError:
        raise ValidationError(_("Grid values must be numbers with an integer resolution."))
    if grid['half_width'] <= 0:
        raise ValidationError(_("Grid half-width must be positive."))
    if grid['resolution'] < 2:
        raise ValidationError(_("Grid resolution must be at least 2."))
    return grid


def parse_param(text: str) -> tuple:
    """Parse one 'name=value' function parameter."""
    match = PARAM_PATTERN.match(text or '')
    if not match:
        raise ValidationError(_("Parameter must look like 'name=value'."))
    name, raw = match.groups()
    if ',' in raw:
        return name, [parse_number(part) for part in raw.split(',')]
    return name, parse_number(raw)
