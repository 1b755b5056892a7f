"""Menu decomposition into ingredient footprints and same-category recommendations.

A menu item's footprint is always recomputed from the current factor registry,
never cached, so a registry reload can't leave stale values behind. Ingredient
terms are summed in ascending variant order, which makes the total independent
of how the recipe happens to list them, bit for bit.
"""

import json
from dataclasses import dataclass
from decimal import Decimal
from typing import Mapping

from .errors import (
    DuplicateKey,
    InvariantViolation,
    ItemNotFound,
    MalformedRow,
    MenuNotFound,
)
from .factors import Category, FactorRegistry, normalize_variant
from .ranking import rank_lower_footprint

_GRAMS_PER_KG = Decimal(1000)


@dataclass(frozen=True)
class IngredientQuantity:
    ingredient: str
    grams: Decimal

    def __post_init__(self):
        object.__setattr__(self, "ingredient", normalize_variant(self.ingredient))
        if not isinstance(self.grams, Decimal) or not self.grams.is_finite() or self.grams <= 0:
            raise InvariantViolation(f"grams must be a positive finite decimal, got {self.grams}")


@dataclass(frozen=True)
class MenuItem:
    id: str
    name: str
    category: str
    ingredients: tuple[IngredientQuantity, ...]

    def __post_init__(self):
        object.__setattr__(self, "category", self.category.strip().lower())
        if not self.ingredients:
            raise InvariantViolation(f"menu item {self.id!r} has no ingredients")


@dataclass(frozen=True)
class Menu:
    restaurant_id: str
    items: tuple[MenuItem, ...]

    def __post_init__(self):
        seen = set()
        for item in self.items:
            if item.id in seen:
                raise DuplicateKey(f"duplicate menu item id {item.id!r}")
            seen.add(item.id)

    def get(self, item_id: str) -> MenuItem:
        for item in self.items:
            if item.id == item_id:
                return item
        raise ItemNotFound(f"no menu item {item_id!r} in restaurant {self.restaurant_id!r}")


def recipe_footprint(
    ingredients: tuple[IngredientQuantity, ...] | list[IngredientQuantity],
    registry: FactorRegistry,
) -> Decimal:
    """Sum of (grams/1000) x factor(food_ingredient, ingredient), variant-sorted."""
    total = Decimal(0)
    for q in sorted(ingredients, key=lambda q: q.ingredient):
        factor = registry.lookup(Category.FOOD_INGREDIENT, q.ingredient)
        total += (q.grams / _GRAMS_PER_KG) * factor.kg_co2e_per_unit
    return total


def item_footprint(item: MenuItem, registry: FactorRegistry) -> Decimal:
    return recipe_footprint(item.ingredients, registry)


def recommend_menu(
    menu: Menu, chosen: str, registry: FactorRegistry, limit: int = 4
) -> list[MenuItem]:
    """Same-category items with strictly lower footprint than the chosen one.

    Ascending footprint, ties broken by item id, at most `limit` results.
    """
    chosen_item = menu.get(chosen)
    reference = item_footprint(chosen_item, registry)
    candidates = [
        item
        for item in menu.items
        if item.category == chosen_item.category and item.id != chosen_item.id
    ]
    return rank_lower_footprint(
        candidates,
        reference_footprint=reference,
        footprint=lambda item: item_footprint(item, registry),
        tiebreak=lambda item: item.id,
        limit=limit,
    )


def _parse_grams(value) -> Decimal:
    if isinstance(value, Decimal):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Decimal(value)
    raise InvariantViolation(f"grams must be a number, got {value!r}")


def _menu_from_obj(obj: dict) -> Menu:
    try:
        restaurant_id = obj["restaurant_id"]
        raw_items = obj["items"]
    except (KeyError, TypeError):
        raise MalformedRow(0, "menu document needs restaurant_id and items") from None
    items = []
    for raw in raw_items:
        ingredients = tuple(
            IngredientQuantity(ing["ingredient"], _parse_grams(ing["grams"]))
            for ing in raw["ingredients"]
        )
        items.append(MenuItem(raw["id"], raw["name"], raw["category"], ingredients))
    return Menu(restaurant_id, tuple(items))


def load_menus(json_text: str) -> Mapping[str, Menu]:
    """Parse one menu document or an array of them, keyed by restaurant id.

    JSON numbers are read as Decimal so gram quantities ingest exactly.
    """
    data = json.loads(json_text, parse_float=Decimal)
    docs = data if isinstance(data, list) else [data]
    menus: dict[str, Menu] = {}
    for doc in docs:
        menu = _menu_from_obj(doc)
        if menu.restaurant_id in menus:
            raise DuplicateKey(f"duplicate restaurant id {menu.restaurant_id!r}")
        menus[menu.restaurant_id] = menu
    return menus


def get_menu(menus: Mapping[str, Menu], restaurant_id: str) -> Menu:
    try:
        return menus[restaurant_id]
    except KeyError:
        raise MenuNotFound(f"no menu for restaurant {restaurant_id!r}") from None
