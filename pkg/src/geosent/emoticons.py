"""Emoticon polarity tables.

One place for the distant-supervision markers so the tokenizer and the
classifier cannot drift apart.  Callers may pass their own tables to
override these defaults.
"""

POSITIVE = (":)", ":-)", ":D", "=)", ";)")
NEGATIVE = (":(", ":-(", ":'(", "=(")
ALL = POSITIVE + NEGATIVE
