import logging
from functools import wraps

import click
from marshmallow import ValidationError

from src.utils.errors import HyperzeroError, NoConvergence

logger = logging.getLogger(__name__)


def validate_input(schema):
    """Decorator to validate command options using a marshmallow schema"""
    def decorator(f):
        @wraps(f)
        def decorated_function(*args, **kwargs):
            raw = {k: v for k, v in kwargs.items() if v is not None and v != ()}
            try:
                data = schema.load(raw)
            except ValidationError as e:
                for field, messages in sorted(e.normalized_messages().items()):
                    click.echo(f'Invalid {field}: {" ".join(map(str, _flatten(messages)))}', err=True)
                raise click.exceptions.Exit(2)
            return f(data, *args)
        return decorated_function
    return decorator


def handle_errors(f):
    """Decorator to map library errors onto exit codes"""
    @wraps(f)
    def decorated_function(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except NoConvergence as e:
            click.echo(f'Error: {e} ({len(e.partial)} zero(s) found before the failure)', err=True)
            raise click.exceptions.Exit(e.exit_code)
        except HyperzeroError as e:
            click.echo(f'Error: {e}', err=True)
            raise click.exceptions.Exit(e.exit_code)
        except (click.exceptions.Exit, click.ClickException):
            raise
        except Exception as e:
            logger.exception('Unexpected failure')
            click.echo(f'Internal error: {e}', err=True)
            raise click.exceptions.Exit(1)

    return decorated_function


def _flatten(messages):
    if isinstance(messages, dict):
        for value in messages.values():
            yield from _flatten(value)
    elif isinstance(messages, (list, tuple)):
        for value in messages:
            yield from _flatten(value)
    else:
        yield messages
