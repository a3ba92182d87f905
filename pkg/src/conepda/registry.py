"""Registry of constructions that claim a language identity.

Each such function is decorated with :func:`language_construction`; the
verification harness must name it in the ``covers`` list of some suite.
"""

CONSTRUCTIONS: set = set()


def language_construction(f):
    CONSTRUCTIONS.add(f"{f.__module__.rsplit('.', 1)[-1]}.{f.__qualname__}")
    return f
