# apps/experiments/forms.py
from django import forms
from django.conf import settings

from apps.ffield.field import FieldError, field_parse
from apps.fqpoly.dense import PolynomialError
from apps.hlcount.tuples import build_tuple_spec, split_offsets, validate_tuple

from .grid import grid_policy

MODE_CHOICES = (
    ('exact', 'Exact enumeration'),
    ('sample', 'Sampled estimate'),
    ('cr', 'Discriminant density'),
    ('cycles', 'Joint cycle types'),
)

FORMAT_CHOICES = (
    ('json', 'JSON lines'),
    ('csv', 'CSV'),
)


class SweepConfigForm(forms.Form):
    field = forms.CharField(required=False)
    grid_max = forms.IntegerField(required=False, min_value=2)
    n = forms.IntegerField(min_value=1)
    offsets = forms.CharField()
    mode = forms.ChoiceField(choices=MODE_CHOICES, required=False)
    samples = forms.IntegerField(required=False, min_value=1)
    seed = forms.IntegerField(required=False, min_value=0)
    shards = forms.IntegerField(required=False, min_value=1)
    budget = forms.IntegerField(required=False, min_value=1)
    out = forms.CharField(required=False)
    format = forms.ChoiceField(choices=FORMAT_CHOICES, required=False)
    allow_even_q = forms.BooleanField(required=False)

    def clean_field(self):
        labels = [s.strip() for s in (self.cleaned_data.get('field') or '').split(',') if s.strip()]
        errors = []
        for label in labels:
            try:
                field_parse(label)
            except FieldError as e:
                errors.append(f"{label}: {e}")
        if errors:
            raise forms.ValidationError(errors)
        return labels

    def clean_offsets(self):
        offsets = split_offsets(self.cleaned_data['offsets'])
        if not offsets:
            raise forms.ValidationError("At least one offset is required.")
        return offsets

    def clean(self):
        cleaned_data = super().clean()
        if self.errors:
            return cleaned_data

        cleaned_data['mode'] = cleaned_data.get('mode') or 'exact'
        cleaned_data['format'] = cleaned_data.get('format') or 'json'
        cleaned_data['shards'] = cleaned_data.get('shards') or 1
        if cleaned_data.get('seed') is None:
            cleaned_data['seed'] = settings.HLLAB_DEFAULT_SEED
        if cleaned_data.get('budget') is None:
            cleaned_data['budget'] = settings.HLLAB_BUDGET

        grid = list(cleaned_data['field'])
        if cleaned_data.get('grid_max'):
            grid += [label for label in grid_policy(cleaned_data['grid_max'],
                                                   odd_only=not cleaned_data['allow_even_q'])
                     if label not in grid]
        cleaned_data['grid'] = grid

        mode = cleaned_data['mode']
        errors = []
        if mode in ('sample', 'cycles') and not cleaned_data.get('samples'):
            errors.append(f"Mode '{mode}' needs a sample count.")
        if mode == 'cr' and cleaned_data['n'] < 2:
            errors.append("The discriminant density needs n >= 2.")

        # Every grid point must pass before any work starts
        for label in grid:
            try:
                spec = build_tuple_spec(label, cleaned_data['n'], cleaned_data['offsets'],
                                        cleaned_data['allow_even_q'])
            except (FieldError, PolynomialError) as e:
                errors.append(f"{label}: {e}")
                continue
            errors.extend(f"{label}: {v}" for v in validate_tuple(spec))
        if errors:
            raise forms.ValidationError(errors)
        return cleaned_data
