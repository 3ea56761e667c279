"""Cafeteria Ordering System: a desk-scale industrial model.

Encodes the COS requirements catalog (a module of a cafeteria management
system that lets employees order meals online): 49 functional
requirements, 11 quality scenarios, 7 design constraints. The dotted
functional ids mirror the catalog's use-case hierarchy; dependency edges
follow that hierarchy plus the catalog's explicit cross-references.
Where the catalog only implies a relation, the edge carries an
"inferred" note; counts and parameters are the catalog-level facts,
the edge set is a best-effort reading.
"""

from __future__ import annotations

from decompgame.model import (
    AttributePrimitive,
    Constraint,
    GameModel,
    GameParams,
    Kind,
    Requirement,
)
from decompgame.utility import default_tradeoff_matrix

# (id, description); the dotted path of each id is its place in the
# use-case hierarchy, from which the tree dependency edges are derived.
_FUNCTIONAL: tuple[tuple[str, str], ...] = (
    ("Order.Place", "place a meal order"),
    ("Order.Place.Register", "check payroll-deduction registration"),
    ("Order.Place.Register.No", "offer registration before continuing"),
    ("Order.Place.Date", "ask for the meal date"),
    ("Order.Place.Date.Cutoff", "handle same-day orders past the cutoff time"),
    ("Order.Deliver", "delivery or pickup handling"),
    ("Order.Deliver.Select", "choose pickup or delivery"),
    ("Order.Deliver.Location", "collect a valid delivery location"),
    ("Order.Deliver.Notimes", "handle the no-remaining-delivery-slots case"),
    ("Order.Deliver.Times", "offer the remaining delivery slots"),
    ("Order.Menu", "menu viewing"),
    ("Order.Menu.Date", "show the menu for a chosen date"),
    ("Order.Menu.Available", "list only items in stock and deliverable"),
    ("Order.Units", "order quantities"),
    ("Order.Units.Multiple", "allow several identical meals in one order"),
    ("Order.Units.TooMany", "cap ordered units at current inventory"),
    ("Order.Confirm", "order confirmation"),
    ("Order.Confirm.Display", "summarize ordered items and payment amount"),
    ("Order.Confirm.Prompt", "ask the patron to confirm"),
    ("Order.Confirm.Response", "confirm, edit, or cancel"),
    ("Order.Confirm.More", "start another order"),
    ("Order.Pay", "meal order payment"),
    ("Order.Pay.Method", "choose a payment method"),
    ("Order.Pay.Deliver", "delivery orders pay by payroll deduction"),
    ("Order.Pay.Pickup", "pickup orders pay by deduction or cash"),
    ("Order.Pay.Deduct", "issue a payment request to payroll"),
    ("Order.Pay.OK", "show confirmation of an accepted payment request"),
    ("Order.Pay.NG", "show the reasons for a rejected payment request"),
    ("Order.Done", "post-confirmation processing"),
    ("Order.Done.Store", "assign an order number and store the order"),
    ("Order.Done.Inventory", "notify the inventory system of ordered units"),
    ("Order.Done.Menu", "refresh the menu's out-of-stock state"),
    ("Order.Done.Times", "refresh the remaining delivery slots"),
    ("Order.Done.Patron", "email the patron the order and payment info"),
    ("Order.Done.Cafeteria", "email cafeteria staff the order"),
    ("Order.Done.Failure", "roll back and notify on any failed step"),
    ("Order.Retrieve", "recall a previously placed order"),
    ("UI2", "per-page help link"),
    ("UI3", "complete page navigation and item selection"),
    ("SI1.1", "push ordered quantities to the inventory system"),
    ("SI1.2", "poll the inventory system for item availability"),
    ("SI1.3", "drop menu items the inventory system reports unavailable"),
    ("SI2.1", "submit payment requests to the payroll system"),
    ("SI2.2", "receive payment acceptance from payroll"),
    ("SI2.3", "receive payment rejection from payroll"),
    ("SI2.4", "payroll interface, further operation"),
    ("SI2.5", "payroll interface, further operation"),
    ("CI1", "message the patron on order acceptance"),
    ("CI2", "message the patron on problems"),
)

# (id, general scenario, description). ROB1 and SAF1 have no column of
# their own in the stock tradeoff matrix; they are filed under
# Availability and Usability respectively (inference).
_SCENARIOS: tuple[tuple[str, str, str], ...] = (
    ("USE1", "Usability", "reorder a previous meal with a single interaction"),
    ("USE2", "Usability", "new users order successfully on the first try"),
    ("PER1", "Performance", "400 users, 100 concurrent at peak"),
    ("PER2", "Performance", "pages download fully within 4 seconds"),
    ("PER3", "Performance", "confirmations shown within 3 seconds on average"),
    ("SEC1", "Security", "encrypt financial and personal network traffic"),
    ("SEC2", "Security", "login required for everything but menu viewing"),
    ("SEC4", "Security", "patrons see only their own orders"),
    ("SAF1", "Usability", "show ingredients and allergy information"),
    ("AVL1", "Availability", "available 98 percent of 5am to midnight"),
    ("ROB1", "Availability", "recover an interrupted order"),
)

# Constraint membership follows the catalog's cross-references:
# BR-8 <- "See BR-8" on Order.Place.Date; BR-11 <- the payment-on-delivery
# rule that Order.Pay.Deliver and Order.Pay.Deduct implement; BR-33 <- the
# encryption rule SEC1 cites, applied where payment data moves (Deduct).
# CO-2 (database engine) touches order storage and menu data; CO-3 (HTML
# standard) touches the webpage requirements; BR-2 (delivery window) the
# delivery-time requirements; BR-3 (single location) delivery location.
_CONSTRAINTS: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("CO-2", ("Order.Done.Store", "Order.Menu.Date")),
    ("CO-3", ("UI2", "UI3", "PER2")),
    ("BR-2", ("Order.Deliver.Times", "Order.Deliver.Notimes", "Order.Done.Times")),
    ("BR-3", ("Order.Deliver.Location",)),
    ("BR-8", ("Order.Place.Date",)),
    ("BR-11", ("Order.Pay.Deliver", "Order.Pay.Deduct")),
    ("BR-33", ("SEC1", "Order.Pay.Deduct")),
)

# Dependency edges beyond the id hierarchy, (a, b) meaning a depends on b.
_CROSS_DEPENDS: tuple[tuple[str, str], ...] = (
    ("Order.Done", "Order.Confirm"),  # Done runs once the order is confirmed
    ("Order.Menu.Available", "SI1.2"),  # availability comes from polling inventory
    ("Order.Done.Inventory", "SI1.1"),  # unit counts go out through SI1.1
    ("Order.Done.Patron", "CI1"),  # patron mail goes through CI1
    ("Order.Done.Failure", "CI2"),  # problem reports go through CI2
    ("Order.Pay.Deduct", "SI2.1"),  # payment requests go to payroll
    ("Order.Pay.OK", "SI2.2"),  # acceptance arrives from payroll
    ("Order.Pay.NG", "SI2.3"),  # rejection arrives from payroll
    ("Order.Retrieve", "Order.Place"),  # a recalled order re-enters placement
    ("SI1.3", "Order.Menu"),  # inventory notifications update the menu (inferred)
)

# Scenario-to-functional derivations. (SEC1, Order.Pay.Deduct) is the
# catalog's explicit pair; the rest are inferred from scenario wording.
_DERIVES: tuple[tuple[str, str], ...] = (
    ("SEC1", "Order.Pay.Deduct"),
    ("USE1", "Order.Retrieve"),
    ("ROB1", "Order.Done.Failure"),
    ("SAF1", "Order.Menu.Date"),
)


def cos_model() -> GameModel:
    requirements = [
        Requirement(id=rid, kind=Kind.FUNCTIONAL, description=desc)
        for rid, desc in _FUNCTIONAL
    ]
    requirements.extend(
        Requirement(id=rid, kind=Kind.SCENARIO, description=desc, general_scenario=label)
        for rid, label, desc in _SCENARIOS
    )

    functional_ids = {rid for rid, _ in _FUNCTIONAL}
    depends = set(_CROSS_DEPENDS)
    for rid in functional_ids:
        parent = rid.rsplit(".", 1)[0]
        if parent != rid and parent in functional_ids:
            depends.add((rid, parent))

    constraints = tuple(
        Constraint(id=cid, members=frozenset(members)) for cid, members in _CONSTRAINTS
    )

    primitive = AttributePrimitive(
        name="cos",
        requirements=tuple(requirements),
        constraints=constraints,
        depends=frozenset(depends),
        derives=frozenset(_DERIVES),
        tradeoff=default_tradeoff_matrix(),
    )
    return GameModel(
        primitive=primitive,
        params=GameParams(alpha=0.4, beta=0.3, gamma=0.3, lam=-1.3, k=3),
    )
