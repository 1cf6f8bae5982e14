# File: observability.py
# Error tracking (Sentry): opt-in, data-safe.
#
# Runs here handle full covariance matrices and possibly licensed returns
# data. Sentry captures unexpected exceptions (exit code 1) without shipping
# either:
#   * No DSN set -> Sentry is completely disabled.
#   * include_local_variables=False -> frame locals (matrices, panels) are
#     never captured.
#   * before_send drops the command line (it names input files) and reduces
#     absolute paths in breadcrumbs to their base name.

import os

# Extra/context keys that can carry the command line or the environment.
_SENSITIVE_EXTRA = {'sys.argv', 'argv'}
_SENSITIVE_CONTEXTS = {'argv', 'environment'}


def _strip_path(text):
    if isinstance(text, str) and os.path.isabs(text):
        return os.path.basename(text)
    return text


def _scrub(event, hint):
    """before_send hook: drop argv and absolute file paths."""
    extra = event.get('extra')
    if isinstance(extra, dict):
        for key in _SENSITIVE_EXTRA:
            extra.pop(key, None)
    contexts = event.get('contexts')
    if isinstance(contexts, dict):
        for key in _SENSITIVE_CONTEXTS:
            contexts.pop(key, None)
    crumbs = event.get('breadcrumbs')
    values = crumbs.get('values') if isinstance(crumbs, dict) else crumbs
    if isinstance(values, list):
        for crumb in values:
            if not isinstance(crumb, dict):
                continue
            crumb['message'] = _strip_path(crumb.get('message'))
            data = crumb.get('data')
            if isinstance(data, dict):
                for key in list(data):
                    data[key] = _strip_path(data[key])
    event.pop('user', None)
    return event


def init_sentry():
    """Initialise Sentry iff SENTRY_DSN is set. Returns True if enabled."""
    dsn = (os.environ.get('SENTRY_DSN') or '').strip()
    if not dsn:
        return False

    import sentry_sdk

    sentry_sdk.init(
        dsn=dsn,
        environment=os.environ.get('LOREC_ENV', 'production'),
        send_default_pii=False,
        include_local_variables=False,
        before_send=_scrub,
        traces_sample_rate=0.0,
    )
    return True


def report_exception(exc):
    """Forward an unexpected exception to Sentry when it is enabled."""
    import sentry_sdk

    if sentry_sdk.is_initialized():
        sentry_sdk.capture_exception(exc)
